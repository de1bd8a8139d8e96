#pragma once

// Everything except the command-line front end (goedel/cli.hpp).
#include "rational.hpp"
#include "formula.hpp"
#include "syntax.hpp"
#include "goedel_set.hpp"
#include "semantics.hpp"
#include "omega.hpp"
#include "decide.hpp"
#include "proofkit.hpp"
#include "proof_builder.hpp"
#include "herbrand.hpp"
#include "transforms.hpp"
#include "json_io.hpp"
