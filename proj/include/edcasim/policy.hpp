#pragma once

#include <array>
#include <cstdint>
#include <map>

#include "edcasim/access_category.hpp"

namespace edcasim::policy {

// Largest contention window the PHY supports.
inline constexpr std::uint32_t kPhyCwMax = 1023;

// MAC contention parameters for one access category.
struct AcParams {
    std::uint32_t aifsn = 2;    // idle slots before backoff may count down, >= 2
    std::uint32_t cw_min = 1;
    std::uint32_t cw_max = 1;   // cw_min <= cw_max <= kPhyCwMax

    bool operator==(const AcParams&) const = default;
};

// One full advertisement of per-category parameters. The epoch is a revision
// counter: it moves only when a rebuild actually changes some field.
struct EdcaParamSet {
    std::array<AcParams, kAccessCategoryCount> params{};
    std::uint64_t epoch = 0;

    const AcParams& for_ac(AccessCategory ac) const { return params[ac_index(ac)]; }
    AcParams& for_ac(AccessCategory ac) { return params[ac_index(ac)]; }

    bool operator==(const EdcaParamSet&) const = default;
};

// QoS Capability flags carried in (re)association requests: which categories
// the station will use. BK is accepted but never drives adaptation.
struct QosCapabilityFlags {
    bool vo = false;
    bool vi = false;
    bool be = false;
    bool bk = false;
};

// Per-category association counts kept by the access point. BK is untracked.
struct AcCounters {
    std::uint32_t n_vo = 0;
    std::uint32_t n_vi = 0;
    std::uint32_t n_be = 0;

    bool operator==(const AcCounters&) const = default;
};

// Which adaptable categories currently have at least one associated station.
struct ActivityStatus {
    bool vo = false;
    bool vi = false;
    bool be = false;

    bool operator==(const ActivityStatus&) const = default;
};

struct CwRange {
    std::uint32_t cw_min = 0;
    std::uint32_t cw_max = 0;

    bool operator==(const CwRange&) const = default;
};

// Default parameters (the standard's static table):
//   VO {2, 3, 7}, VI {2, 7, 15}, BE {3, 15, 1023}, BK {7, 15, 1023}, epoch 0.
EdcaParamSet static_edca_params();

// Count one (dis)association. Both return the updated counters; a
// disassociation that would push any flagged counter below zero throws
// UnderflowError and leaves nothing half-applied.
AcCounters register_association(AcCounters counters, const QosCapabilityFlags& flags);
AcCounters register_disassociation(AcCounters counters, const QosCapabilityFlags& flags);

ActivityStatus activity_status(const AcCounters& counters);

// AIFSN for the active categories only: the most senior active category gets
// 2 and each junior active category one more. Inactive categories are absent
// from the result; all-inactive yields an empty map.
std::map<AccessCategory, std::uint32_t> compute_aifsn(const ActivityStatus& status);

// Contention window range for a category with n_ac associated stations:
//   cw_min = 2^ceil(log2(n_ac / 2)) - 1, at least 1
//   cw_max = 2^ceil(log2(2 * n_ac)) - 1, at most kPhyCwMax
// Exact integer arithmetic throughout; throws DomainError when n_ac < 1.
CwRange compute_cw(std::uint64_t n_ac);

// Assemble the advertisement for the current counters: adapted values for
// active categories, static defaults for inactive ones and for BK. The epoch
// is previous.epoch + 1 when any field changed, otherwise previous.epoch.
EdcaParamSet build_param_set(const AcCounters& counters, const EdcaParamSet& previous);

}  // namespace edcasim::policy
