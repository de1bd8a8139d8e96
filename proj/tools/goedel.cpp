#include <goedel/cli.hpp>

int main(int argc, char** argv) { return goedel::cli::run(argc, argv, std::cout, std::cerr); }
