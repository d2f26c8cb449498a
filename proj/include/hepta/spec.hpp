#pragma once

#include <stdexcept>

namespace hepta {

struct InvalidSpecError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Parameters of the corner-perturbed heptadiagonal symmetric family:
/// Toeplitz interior with main diagonal a, first band b, second band c,
/// third band d; the four corner positions carry xi on (1,1) and (n,n)
/// and eta on (1,2), (2,1), (n-1,n), (n,n-1).
struct HeptaSpec {
    int n = 0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
    double xi = 0.0;
    double eta = 0.0;

    /// n >= 5 so the corner blocks never overlap; all scalars finite.
    void validate() const;
};

/// Corner defect relative to the exactly-diagonalizable member of the
/// family: theta = (c + xi) - a, vartheta = (d + eta) - b, evaluated in
/// exactly that association order.
struct CornerGap {
    double theta = 0.0;
    double vartheta = 0.0;
};

CornerGap corner_gap(const HeptaSpec& spec);

} // namespace hepta
