#include "edcasim/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "edcasim/errors.hpp"

namespace edcasim::runner {

namespace {

std::string trim(std::string_view s) {
    const auto* ws = " \t\r";
    const auto begin = s.find_first_not_of(ws);
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(ws);
    return std::string(s.substr(begin, end - begin + 1));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

[[noreturn]] void fail(int line_no, const std::string& message) {
    throw ConfigError("line " + std::to_string(line_no) + ": " + message);
}

double parse_double(const std::string& value, int line_no) {
    double out = 0.0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    const auto res = std::from_chars(begin, end, out);
    if (res.ec != std::errc{} || res.ptr != end)
        fail(line_no, "expected a number, got '" + value + "'");
    if (!std::isfinite(out)) fail(line_no, "value must be finite");
    return out;
}

std::uint64_t parse_uint(const std::string& value, int line_no) {
    if (!value.empty() && value[0] == '-') fail(line_no, "value must not be negative");
    std::uint64_t out = 0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    const auto res = std::from_chars(begin, end, out);
    if (res.ec != std::errc{} || res.ptr != end)
        fail(line_no, "expected a non-negative integer, got '" + value + "'");
    return out;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// Group state while parsing; payload defaults depend on the category, so the
// default is applied only after the whole group is read.
struct PendingGroup {
    StationGroup group;
    bool payload_explicit = false;
    int line_no = 0;
};

void finish_group(PendingGroup& pending, std::vector<StationGroup>& out) {
    if (!pending.payload_explicit) {
        if (pending.group.ac == AccessCategory::BK)
            fail(pending.line_no, "bk groups need an explicit payload_bytes");
        pending.group.source.payload_bytes =
            traffic::default_source_for(pending.group.ac).payload_bytes;
    }
    out.push_back(pending.group);
}

}  // namespace

ScenarioSpec parse_scenario(const std::string& text) {
    ScenarioSpec spec;
    spec.scenario_id.clear();
    std::optional<PendingGroup> current;

    std::istringstream stream(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line = trim(line.substr(0, hash));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line != "[group]") fail(line_no, "unknown section '" + line + "'");
            if (current) finish_group(*current, spec.station_groups);
            current.emplace();
            current->line_no = line_no;
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(line_no, "missing key before '='");
        if (value.empty()) fail(line_no, "missing value for '" + key + "'");

        if (!current) {
            if (key == "scenario_id") spec.scenario_id = value;
            else if (key == "duration_s") spec.duration_s = parse_double(value, line_no);
            else if (key == "warmup_s") spec.warmup_s = parse_double(value, line_no);
            else if (key == "beacon_interval_s") spec.beacon_interval_s = parse_double(value, line_no);
            else if (key == "slot_time_s") spec.slot_time_s = parse_double(value, line_no);
            else if (key == "phy_rate_bps") spec.phy_rate_bps = parse_double(value, line_no);
            else if (key == "retry_limit") spec.retry_limit = static_cast<std::uint32_t>(parse_uint(value, line_no));
            else if (key == "sifs_s") spec.sifs_s = parse_double(value, line_no);
            else if (key == "ack_s") spec.ack_s = parse_double(value, line_no);
            else if (key == "preamble_s") spec.preamble_s = parse_double(value, line_no);
            else if (key == "beacon_bytes") spec.beacon_bytes = static_cast<std::uint32_t>(parse_uint(value, line_no));
            else fail(line_no, "unknown key '" + key + "'");
            continue;
        }

        StationGroup& g = current->group;
        if (key == "ac") {
            try {
                g.ac = ac_from_name(lower(value));
            } catch (const DomainError&) {
                fail(line_no, "unknown access category '" + value + "'");
            }
        } else if (key == "count") {
            const auto n = parse_uint(value, line_no);
            if (n > 100000) fail(line_no, "group count " + value + " is implausibly large");
            g.count = static_cast<std::uint32_t>(n);
        } else if (key == "mode") {
            const std::string m = lower(value);
            if (m == "saturated") g.source.mode = traffic::TrafficMode::Saturated;
            else if (m == "constant_rate") g.source.mode = traffic::TrafficMode::ConstantRate;
            else fail(line_no, "mode must be saturated or constant_rate, got '" + value + "'");
        } else if (key == "payload_bytes") {
            g.source.payload_bytes = static_cast<std::uint32_t>(parse_uint(value, line_no));
            current->payload_explicit = true;
        } else if (key == "rate_fps") {
            g.source.rate_fps = parse_double(value, line_no);
        } else if (key == "queue_capacity") {
            g.source.queue_capacity = static_cast<std::uint32_t>(parse_uint(value, line_no));
        } else if (key == "join_s") {
            g.join_s = parse_double(value, line_no);
        } else if (key == "leave_s") {
            g.leave_s = parse_double(value, line_no);
        } else {
            fail(line_no, "unknown key '" + key + "' in [group]");
        }
    }
    if (current) finish_group(*current, spec.station_groups);

    validate(spec);
    return spec;
}

ScenarioSpec load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read scenario file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

std::string write_scenario(const ScenarioSpec& spec) {
    std::string out;
    out += "scenario_id = " + spec.scenario_id + "\n";
    out += "duration_s = " + format_double(spec.duration_s) + "\n";
    out += "warmup_s = " + format_double(spec.warmup_s) + "\n";
    out += "beacon_interval_s = " + format_double(spec.beacon_interval_s) + "\n";
    out += "slot_time_s = " + format_double(spec.slot_time_s) + "\n";
    out += "phy_rate_bps = " + format_double(spec.phy_rate_bps) + "\n";
    out += "retry_limit = " + std::to_string(spec.retry_limit) + "\n";
    out += "sifs_s = " + format_double(spec.sifs_s) + "\n";
    out += "ack_s = " + format_double(spec.ack_s) + "\n";
    out += "preamble_s = " + format_double(spec.preamble_s) + "\n";
    out += "beacon_bytes = " + std::to_string(spec.beacon_bytes) + "\n";
    for (const StationGroup& g : spec.station_groups) {
        out += "\n[group]\n";
        out += "ac = " + std::string(ac_name(g.ac)) + "\n";
        out += "count = " + std::to_string(g.count) + "\n";
        out += std::string("mode = ") +
               (g.source.mode == traffic::TrafficMode::Saturated ? "saturated" : "constant_rate") +
               "\n";
        out += "payload_bytes = " + std::to_string(g.source.payload_bytes) + "\n";
        if (g.source.mode == traffic::TrafficMode::ConstantRate) {
            out += "rate_fps = " + format_double(g.source.rate_fps) + "\n";
            out += "queue_capacity = " + std::to_string(g.source.queue_capacity) + "\n";
        }
        out += "join_s = " + format_double(g.join_s) + "\n";
        if (g.leave_s) out += "leave_s = " + format_double(*g.leave_s) + "\n";
    }
    return out;
}

void validate(const ScenarioSpec& spec) {
    auto bad = [](const std::string& message) { throw ConfigError(message); };

    if (spec.scenario_id.empty()) bad("scenario_id must be set");
    for (char c : spec.scenario_id) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.')
            bad("scenario_id may only contain letters, digits, '_', '-', '.'");
    }

    if (!(spec.duration_s > 0)) bad("duration_s must be positive");
    if (spec.warmup_s < 0) bad("warmup_s must not be negative");
    if (spec.warmup_s >= spec.duration_s) bad("warmup_s must be smaller than duration_s");
    if (!(spec.beacon_interval_s > 0)) bad("beacon_interval_s must be positive");
    if (std::llround(spec.slot_time_s * 1e6) < 1) bad("slot_time_s must be at least one microsecond");
    if (std::llround(spec.ack_s * 1e6) < 1) bad("ack_s must be at least one microsecond");
    if (spec.sifs_s < 0 || spec.preamble_s < 0) bad("sifs_s and preamble_s must not be negative");
    if (spec.phy_rate_bps < 1.0) bad("phy_rate_bps must be at least 1");

    std::uint64_t total = 0;
    for (std::size_t i = 0; i < spec.station_groups.size(); ++i) {
        const StationGroup& g = spec.station_groups[i];
        const std::string where = "group " + std::to_string(i + 1) + ": ";
        total += g.count;
        if (g.source.payload_bytes < 1) bad(where + "payload_bytes must be at least 1");
        if (g.source.mode == traffic::TrafficMode::ConstantRate) {
            if (!(g.source.rate_fps > 0)) bad(where + "constant_rate needs rate_fps > 0");
            if (g.source.rate_fps > 1e6) bad(where + "rate_fps above one frame per microsecond");
            if (g.source.queue_capacity < 1) bad(where + "queue_capacity must be at least 1");
        }
        if (g.join_s < 0) bad(where + "join_s must not be negative");
        if (g.join_s >= spec.duration_s) bad(where + "join_s must fall inside the run");
        if (g.leave_s && *g.leave_s <= g.join_s) bad(where + "leave_s must come after join_s");
    }
    if (total < 1) bad("scenario needs at least one station");
}

std::vector<ScenarioSpec> paper_grid(unsigned scale) {
    if (scale < 1) throw DomainError("grid scale must be at least 1");

    struct Overlay {
        std::string tag;
        std::uint32_t vo = 0;
        std::uint32_t vi = 0;
    };
    const std::vector<Overlay> overlays = {
        {"", 0, 0},       {"_vo05", 5, 0},  {"_vo15", 15, 0}, {"_vo30", 30, 0},
        {"_vi05", 0, 5},  {"_vi15", 0, 15}, {"_vi30", 0, 30}, {"_vo15_vi15", 15, 15},
    };
    const std::vector<std::uint32_t> be_counts = {32, 64, 128, 256, 512};

    auto scaled = [scale](std::uint32_t n) { return std::max<std::uint32_t>(1, n / scale); };

    std::vector<ScenarioSpec> grid;
    for (std::uint32_t be : be_counts) {
        for (const Overlay& ov : overlays) {
            ScenarioSpec spec;
            char id[32];
            std::snprintf(id, sizeof id, "be%03u%s", be, ov.tag.c_str());
            spec.scenario_id = id;
            if (scale > 1) spec.scenario_id += "_s" + std::to_string(scale);
            if (ov.vo > 0)
                spec.station_groups.push_back(
                    {AccessCategory::VO, scaled(ov.vo), traffic::default_source_for(AccessCategory::VO), 0.0, {}});
            if (ov.vi > 0)
                spec.station_groups.push_back(
                    {AccessCategory::VI, scaled(ov.vi), traffic::default_source_for(AccessCategory::VI), 0.0, {}});
            spec.station_groups.push_back(
                {AccessCategory::BE, scaled(be), traffic::default_source_for(AccessCategory::BE), 0.0, {}});
            validate(spec);
            grid.push_back(std::move(spec));
        }
    }
    return grid;
}

}  // namespace edcasim::runner
