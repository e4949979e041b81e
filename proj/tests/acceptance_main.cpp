#include <iostream>

#include "casimir/validation.hpp"

int main() {
    const auto results = casimir::validation::run_acceptance();
    const int failures = casimir::validation::report(results, std::cout);
    std::cout << results.size() - failures << "/" << results.size() << " criteria passed\n";
    return failures;
}
