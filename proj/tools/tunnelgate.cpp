#include <iostream>

#include "tunnelgate_app.hpp"

int main(int argc, char** argv) {
    return tunnelgate::cli::run(argc, argv, std::cout, std::cerr);
}
