#pragma once

#include <cstdint>

#include "fsum/psi.hpp"

namespace fsum {

/// Brute-force dense-grid extrema of the tail kernel, coded independently
/// of the refined certified search: plain per-point summation and a linear
/// scan, with the Lipschitz grid radius reported. Serves as the reference
/// the refined path is compared against.
struct OracleResult {
    double max_val = 0.0;
    double min_val = 0.0;
    double point_radius = 0.0; // truncation + roundoff per sample
    double lip_delta = 0.0;    // L * grid spacing / 2
    std::int64_t points = 0;
    std::int64_t terms = 0;

    // enclosure of the exact class error (max - min)/(2 pi)
    double e_lower() const;
    double e_upper() const;
};

OracleResult grid_oracle(const PsiSequence& psi, double beta, std::int64_t n,
                         std::int64_t points, double trunc_tol);

} // namespace fsum
