#include "edcasim/policy.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "edcasim/errors.hpp"

namespace edcasim::policy {

namespace {

// ceil(log2(n)) for n >= 1, without floating point.
unsigned ceil_log2(std::uint64_t n) {
    return n <= 1 ? 0 : static_cast<unsigned>(std::bit_width(n - 1));
}

}  // namespace

EdcaParamSet static_edca_params() {
    EdcaParamSet s;
    s.for_ac(AccessCategory::VO) = {2, 3, 7};
    s.for_ac(AccessCategory::VI) = {2, 7, 15};
    s.for_ac(AccessCategory::BE) = {3, 15, 1023};
    s.for_ac(AccessCategory::BK) = {7, 15, 1023};
    s.epoch = 0;
    return s;
}

AcCounters register_association(AcCounters counters, const QosCapabilityFlags& flags) {
    if (flags.vo) ++counters.n_vo;
    if (flags.vi) ++counters.n_vi;
    if (flags.be) ++counters.n_be;
    return counters;
}

AcCounters register_disassociation(AcCounters counters, const QosCapabilityFlags& flags) {
    if (flags.vo && counters.n_vo == 0)
        throw UnderflowError("disassociation would drop the VO counter below zero");
    if (flags.vi && counters.n_vi == 0)
        throw UnderflowError("disassociation would drop the VI counter below zero");
    if (flags.be && counters.n_be == 0)
        throw UnderflowError("disassociation would drop the BE counter below zero");
    if (flags.vo) --counters.n_vo;
    if (flags.vi) --counters.n_vi;
    if (flags.be) --counters.n_be;
    return counters;
}

ActivityStatus activity_status(const AcCounters& counters) {
    return {counters.n_vo > 0, counters.n_vi > 0, counters.n_be > 0};
}

std::map<AccessCategory, std::uint32_t> compute_aifsn(const ActivityStatus& status) {
    std::map<AccessCategory, std::uint32_t> out;
    std::uint32_t next = 2;
    if (status.vo) out[AccessCategory::VO] = next++;
    if (status.vi) out[AccessCategory::VI] = next++;
    if (status.be) out[AccessCategory::BE] = next++;
    return out;
}

CwRange compute_cw(std::uint64_t n_ac) {
    if (n_ac < 1) throw DomainError("compute_cw needs at least one station, got 0");
    const unsigned e = ceil_log2(n_ac);
    // cw_min: 2^ceil(log2(n/2)) - 1 == 2^(e-1) - 1, floored at 1.
    const std::uint64_t raw_min = e >= 1 ? (std::uint64_t{1} << (e - 1)) - 1 : 0;
    // cw_max: 2^ceil(log2(2n)) - 1 == 2^(e+1) - 1, capped by the PHY.
    const std::uint64_t raw_max = (std::uint64_t{1} << (e + 1)) - 1;
    const auto cw_max = static_cast<std::uint32_t>(std::min<std::uint64_t>(raw_max, kPhyCwMax));
    const auto cw_min = static_cast<std::uint32_t>(
        std::clamp<std::uint64_t>(raw_min, 1, cw_max));
    return {cw_min, cw_max};
}

EdcaParamSet build_param_set(const AcCounters& counters, const EdcaParamSet& previous) {
    EdcaParamSet next = static_edca_params();
    const ActivityStatus active = activity_status(counters);
    const auto aifsn = compute_aifsn(active);
    if (active.vo) {
        const CwRange cw = compute_cw(counters.n_vo);
        next.for_ac(AccessCategory::VO) = {aifsn.at(AccessCategory::VO), cw.cw_min, cw.cw_max};
    }
    if (active.vi) {
        const CwRange cw = compute_cw(counters.n_vi);
        next.for_ac(AccessCategory::VI) = {aifsn.at(AccessCategory::VI), cw.cw_min, cw.cw_max};
    }
    if (active.be) {
        const CwRange cw = compute_cw(counters.n_be);
        next.for_ac(AccessCategory::BE) = {aifsn.at(AccessCategory::BE), cw.cw_min, cw.cw_max};
    }
    next.epoch = next.params == previous.params ? previous.epoch : previous.epoch + 1;
    return next;
}

}  // namespace edcasim::policy
