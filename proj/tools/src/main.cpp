#include <iostream>

#include "twistcert_cli/cli.hpp"

int main(int argc, char** argv) {
    return twistcert::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
