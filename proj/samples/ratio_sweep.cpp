// Sweeps the barrier height of q(x) = a + b sin(pi x) and prints the smallest ratio
// margin of the Dirichlet bound lambda_n / lambda_m >= n^2 / m^2 for each height.
//
//   ratio_sweep [n_max] [csv]
//
// With a CSV potential the sweep is replaced by a single report on that potential.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "slratio/slratio.hpp"

namespace {

void print_summary(const slratio::VerificationReport& r) {
    double worst = 0.0;
    int worst_m = 0, worst_n = 0;
    for (const auto& c : r.checks)
        if (worst_m == 0 || c.margin < worst) {
            worst = c.margin;
            worst_m = c.m;
            worst_n = c.n;
        }
    std::cout << r.potential << "  eligible " << r.eligible_count << "  ineligible " << r.ineligible.size();
    if (worst_m > 0)
        std::cout << "  min margin " << slratio::format_real(worst) << " at (" << worst_m << ',' << worst_n << ')';
    std::cout << "  " << (r.pass ? "pass" : "FAIL") << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    const int n_max = argc > 1 ? std::atoi(argv[1]) : 10;
    try {
        if (argc > 2) {
            std::ifstream in(argv[2]);
            if (!in) {
                std::cerr << "cannot open " << argv[2] << '\n';
                return 2;
            }
            print_summary(slratio::check_theorem2(slratio::load_samples(in), n_max));
            return 0;
        }
        for (double b : {0.0, 1.0, 2.0, 4.0, 8.0}) {
            const auto p = slratio::Potential::barrier_sin(-b - 1.0, b);
            print_summary(slratio::check_theorem2(p, n_max));
        }
    } catch (const slratio::Error& e) {
        std::cerr << e.what() << '\n';
        return 3;
    }
    return 0;
}
