#include <iostream>

#include "ropekit/verify.hpp"

int main() {
    return ropekit::verify::run_acceptance(std::cout) ? 0 : 1;
}
