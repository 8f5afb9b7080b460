// Runs acceptance criteria 1..13 (or the ids given on the command line) and
// prints one PASS/FAIL line per criterion. Soft criteria never fail the run.
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <vector>

#include "ffm/acceptance.hpp"

int main(int argc, char** argv) {
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
    if (ids.empty()) ids = ffm::criteria_group("all");

    int hard_failures = 0;
    for (int id : ids) {
        ffm::CriterionResult r;
        try {
            r = ffm::run_criterion(id);
        } catch (const std::exception& e) {
            r.id = id;
            r.detail = std::string("exception: ") + e.what();
        }
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.id << (r.soft ? " [soft] " : " ") << r.title << " ("
                  << std::fixed << std::setprecision(2) << r.seconds << " s of " << r.time_limit << "): " << r.detail
                  << std::endl;
        if (!r.pass && !r.soft) ++hard_failures;
    }
    std::cout << (hard_failures ? "acceptance: hard failures: " + std::to_string(hard_failures) : std::string("acceptance: all hard criteria pass"))
              << std::endl;
    return hard_failures ? 1 : 0;
}
