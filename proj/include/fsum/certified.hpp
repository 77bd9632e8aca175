#pragma once

#include <cstdint>

namespace fsum {

/// A numeric result paired with a rigorous enclosure radius.
///
/// Whenever the bounding argument used to produce it is valid, the true
/// quantity lies in [value - radius, value + radius].
struct CertifiedValue {
    double value = 0.0;
    double radius = 0.0;
    std::int64_t terms_used = 0;

    double lower() const { return value - radius; }
    double upper() const { return value + radius; }
};

} // namespace fsum
