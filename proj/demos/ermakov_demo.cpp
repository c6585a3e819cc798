// Walks the full analysis pipeline on the Ermakov equation y'' + lambda y^-3 = 0:
// symmetry basis, Noether verdicts, first integrals, and a numeric drift check
// along the exact solution sqrt(1 - x^2) for lambda = 1.

#include <iostream>

#include "lieode/noether.hpp"
#include "lieode/numerics.hpp"
#include "lieode/parse.hpp"
#include "lieode/symmetry.hpp"

using namespace lieode;

int main() {
    EquationSpec eq = EquationSpec::power(1, critical_power(1)); // p = -3
    std::cout << "equation: " << to_string(eq.lhs()) << " = 0\n\n";

    std::cout << "symmetry basis:\n";
    for (const VectorField& vf : catalog(eq)) {
        NoetherVerdict v = noether_check(vf, eq);
        std::cout << "  " << vf.label << ": " << to_text(vf) << "  [";
        switch (v.kind) {
            case NoetherVerdict::Kind::variational: std::cout << "variational"; break;
            case NoetherVerdict::Kind::divergence:
                std::cout << "divergence, gauge " << to_string(*v.gauge);
                break;
            case NoetherVerdict::Kind::not_noether: std::cout << "not Noether"; break;
        }
        std::cout << "]\n";
    }

    FirstIntegralSet ints = first_integral_catalog(1);
    std::cout << "\nfirst integrals:\n";
    std::cout << "  I1 = " << to_string(ints.I1.expr) << "\n";
    std::cout << "  I2 = " << to_string(ints.I2.expr) << "\n";
    std::cout << "  I3 = " << to_string(ints.I3.expr) << "\n";
    std::cout << "  x^2 I1 - 2x I2 + I3 = " << to_string(combination_identity(1)) << "\n";

    SolutionFamily fam = SolutionFamily::make(1, 1.0, 1.0, 0.0, -1.0); // y = sqrt(1 - x^2)
    Trajectory traj = integrate(fam.equation(), fam.state(-0.6), -0.6, 0.6, 1e-10);
    std::cout << "\nnumeric check on y = sqrt(1 - x^2) over [-0.6, 0.6]: " << traj.samples.size()
              << " steps\n";
    for (const char* id : {"I1", "I2", "I3"})
        std::cout << "  drift(" << id << ") = " << drift(traj, ints.by_id(id)) << "\n";
    return 0;
}
