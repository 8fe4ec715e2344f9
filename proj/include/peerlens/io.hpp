#pragma once

#include <charconv>
#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <system_error>

#include "peerlens/scenarios.hpp"

namespace peerlens {

/// 17 significant digits with '.' as the decimal point, regardless of locale.
inline std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    if (res.ec != std::errc{}) {
        throw Error("failed to format number");
    }
    return std::string(buf, res.ptr);
}

// CSV writers. One header row, comma separated, LF line endings.

inline void write_curve_csv(std::ostream& os, std::span<const CurvePoint> curve) {
    os << "p,value\n";
    for (const auto& pt : curve) {
        os << format_number(pt.p) << ',' << format_number(pt.value) << '\n';
    }
}

inline void write_surface_csv(std::ostream& os, std::span<const SurfacePoint> surface) {
    os << "p,r,value\n";
    for (const auto& pt : surface) {
        os << format_number(pt.p) << ',' << format_number(pt.r) << ',' << format_number(pt.value) << '\n';
    }
}

inline constexpr const char* kChoiceColumns =
    "m,q_maj,q_min,investigator_belief,favored_claim,community_mean,community_sd,criterion_value";

inline void write_choices_csv(std::ostream& os, std::span<const ChoiceRecord> records) {
    os << kChoiceColumns << '\n';
    for (const auto& r : records) {
        os << format_number(r.question.majority_fraction) << ',' << format_number(r.question.majority_belief) << ','
           << format_number(r.question.minority_belief) << ',' << format_number(r.investigator_belief) << ','
           << r.favored_claim << ',' << format_number(r.community_mean) << ',' << format_number(r.community_sd)
           << ',' << format_number(r.criterion_value) << '\n';
    }
}

}  // namespace peerlens
