#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "edcasim/errors.hpp"

namespace edcasim {

// The four EDCA access categories, ordered from highest priority (VO) to
// lowest (BK).
enum class AccessCategory : unsigned { VO = 0, VI = 1, BE = 2, BK = 3 };

inline constexpr std::size_t kAccessCategoryCount = 4;

inline constexpr std::array<AccessCategory, kAccessCategoryCount> kAllAccessCategories = {
    AccessCategory::VO, AccessCategory::VI, AccessCategory::BE, AccessCategory::BK};

constexpr std::size_t ac_index(AccessCategory ac) { return static_cast<std::size_t>(ac); }

// True when `a` outranks `b` (VO > VI > BE > BK).
constexpr bool higher_priority(AccessCategory a, AccessCategory b) {
    return ac_index(a) < ac_index(b);
}

constexpr std::string_view ac_name(AccessCategory ac) {
    switch (ac) {
        case AccessCategory::VO: return "vo";
        case AccessCategory::VI: return "vi";
        case AccessCategory::BE: return "be";
        case AccessCategory::BK: return "bk";
    }
    return "?";
}

inline AccessCategory ac_from_name(std::string_view name) {
    for (AccessCategory ac : kAllAccessCategories) {
        if (name == ac_name(ac)) return ac;
    }
    throw DomainError("unknown access category '" + std::string(name) + "'");
}

}  // namespace edcasim
