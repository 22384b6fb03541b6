#include "config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace drivebrake::cli {

namespace {

struct Entry {
    std::string value;
    int line;
};

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s)
{
    for (auto& c : s) c = char(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(int line, const std::string& msg) const
    {
        throw ConfigError(source_ + ":" + std::to_string(line) + ": " + msg);
    }

    double number(const std::string& key, const Entry& e) const
    {
        double x = 0;
        const auto* first = e.value.data();
        const auto* last = first + e.value.size();
        const auto [ptr, ec] = std::from_chars(first, last, x);
        if (ec != std::errc{} || ptr != last) fail(e.line, "key '" + key + "': expected a number, found '" + e.value + "'");
        return x;
    }

    long integer(const std::string& key, const Entry& e) const
    {
        long x = 0;
        const auto* first = e.value.data();
        const auto* last = first + e.value.size();
        const auto [ptr, ec] = std::from_chars(first, last, x);
        if (ec != std::errc{} || ptr != last) fail(e.line, "key '" + key + "': expected an integer, found '" + e.value + "'");
        return x;
    }

    std::vector<double> list(const std::string& key, const Entry& e) const
    {
        std::vector<double> out;
        std::stringstream ss(e.value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) fail(e.line, "key '" + key + "': empty list item");
            out.push_back(number(key, {item, e.line}));
        }
        return out;
    }

    bool boolean(const std::string& key, const Entry& e) const
    {
        const auto v = lower(e.value);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        fail(e.line, "key '" + key + "': expected true or false, found '" + e.value + "'");
    }

    double in_open_unit(const std::string& key, const Entry& e) const
    {
        const double x = number(key, e);
        if (!(x > 0 && x < 1)) fail(e.line, "key '" + key + "': expected a value in (0,1), found " + e.value);
        return x;
    }

    double in_closed_unit(const std::string& key, const Entry& e) const
    {
        const double x = number(key, e);
        if (!(x >= 0 && x <= 1)) fail(e.line, "key '" + key + "': expected a value in [0,1], found " + e.value);
        return x;
    }

    double positive(const std::string& key, const Entry& e) const
    {
        const double x = number(key, e);
        if (!(x > 0)) fail(e.line, "key '" + key + "': expected a positive value, found " + e.value);
        return x;
    }

private:
    std::string source_;
};

const std::set<std::string>& known_keys()
{
    static const std::set<std::string> keys{
        "a", "b", "h", "variant", "w_OO", "seed",
        "grid.preset", "grid.L", "grid.N", "grid.T_end", "grid.M",
        "ic.protocol", "ic.block",
        "drift.profile", "drift.n_left", "drift.n_right", "drift.center", "drift.width", "drift.slope",
        "nagylaki.n0",
        "output.dir", "output.snapshots", "output.raster_interval", "output.pgm",
        "front.level_u", "front.level_v",
        "thresholds.eps_ext", "thresholds.persist_v", "thresholds.trailing_window",
        "phase.n_starts", "phase.t_end", "phase.tail_fraction", "phase.sample_interval",
        "sweep.a", "sweep.b",
    };
    return keys;
}

}  // namespace

InitialCondition RunConfig::initial_condition() const
{
    if (ic_protocol == "figure") return InitialCondition::figure_protocol(grid);
    if (ic_protocol == "appendix") return InitialCondition::appendix(grid);
    InitialCondition ic;
    ic.blocks = custom_blocks;
    return ic;
}

Scenario RunConfig::scenario() const
{
    Scenario s;
    s.params = params;
    s.grid = grid;
    s.ic = initial_condition();
    s.n_field = prescribed_n(drift, grid);
    if (params.variant() == Variant::Nagylaki) s.n0_level = nagylaki_n0;
    s.run.snapshot_times = snapshot_times.empty() ? std::vector<double>{grid.T_end} : snapshot_times;
    s.run.raster_interval = raster_interval;
    s.thresholds = thresholds;
    return s;
}

RunConfig parse_config_text(const std::string& text, const std::string& source)
{
    Reader rd(source);
    std::map<std::string, Entry> kv;
    std::vector<Entry> blocks;

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const auto s = trim(raw);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) rd.fail(line, "expected 'key = value', found '" + s + "'");
        const auto key = trim(s.substr(0, eq));
        const auto value = trim(s.substr(eq + 1));
        if (!known_keys().count(key)) rd.fail(line, "unknown key '" + key + "'");
        if (value.empty()) rd.fail(line, "key '" + key + "' has no value");
        if (key == "ic.block") {
            blocks.push_back({value, line});
            continue;
        }
        if (kv.count(key)) rd.fail(line, "key '" + key + "' repeated (first on line " + std::to_string(kv[key].line) + ")");
        kv[key] = {value, line};
    }

    for (const char* req : {"a", "b", "h"})
        if (!kv.count(req)) throw ConfigError(source + ": missing required key '" + req + "'");

    RunConfig c;
    const double a = rd.in_open_unit("a", kv["a"]);
    const double b = rd.in_open_unit("b", kv["b"]);
    const double h = rd.in_closed_unit("h", kv["h"]);

    Variant variant = Variant::Tanaka;
    if (kv.count("variant")) {
        const auto v = lower(kv["variant"].value);
        if (v == "tanaka") variant = Variant::Tanaka;
        else if (v == "nagylaki") variant = Variant::Nagylaki;
        else rd.fail(kv["variant"].line, "key 'variant': expected tanaka or nagylaki, found '" + kv["variant"].value + "'");
    }
    double w_oo = 1.0;
    if (variant == Variant::Nagylaki) {
        if (!kv.count("w_OO")) rd.fail(kv["variant"].line, "variant nagylaki requires w_OO (positive real)");
        w_oo = rd.positive("w_OO", kv["w_OO"]);
    } else if (kv.count("w_OO")) {
        rd.fail(kv["w_OO"].line, "key 'w_OO' only applies to variant nagylaki");
    }
    c.params = Params(a, b, h, variant, w_oo);

    if (kv.count("seed")) {
        const auto& e = kv["seed"];
        std::uint64_t s = 0;
        const auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), s);
        if (ec != std::errc{} || ptr != e.value.data() + e.value.size())
            rd.fail(e.line, "key 'seed': expected an unsigned 64-bit integer, found '" + e.value + "'");
        c.seed = s;
    }

    if (kv.count("grid.preset")) {
        const auto v = lower(kv["grid.preset"].value);
        if (v == "desk") c.grid = Grid1D::desk();
        else if (v == "full") c.grid = Grid1D::full_resolution();
        else rd.fail(kv["grid.preset"].line, "key 'grid.preset': expected desk or full, found '" + kv["grid.preset"].value + "'");
    }
    {
        double L = c.grid.L, T = c.grid.T_end;
        long N = c.grid.N, M = c.grid.M;
        if (kv.count("grid.L")) L = rd.positive("grid.L", kv["grid.L"]);
        if (kv.count("grid.T_end")) T = rd.positive("grid.T_end", kv["grid.T_end"]);
        if (kv.count("grid.N")) {
            N = rd.integer("grid.N", kv["grid.N"]);
            if (N < 2) rd.fail(kv["grid.N"].line, "key 'grid.N': expected an integer >= 2, found " + kv["grid.N"].value);
        }
        if (kv.count("grid.M")) {
            M = rd.integer("grid.M", kv["grid.M"]);
            if (M < 1) rd.fail(kv["grid.M"].line, "key 'grid.M': expected an integer >= 1, found " + kv["grid.M"].value);
        }
        c.grid = Grid1D(L, int(N), T, M);
    }

    std::string protocol = blocks.empty() ? "figure" : "custom";
    if (kv.count("ic.protocol")) {
        protocol = lower(kv["ic.protocol"].value);
        if (protocol != "figure" && protocol != "appendix" && protocol != "none")
            rd.fail(kv["ic.protocol"].line, "key 'ic.protocol': expected figure, appendix or none, found '" +
                                                kv["ic.protocol"].value + "'");
        if (!blocks.empty())
            rd.fail(kv["ic.protocol"].line, "ic.protocol cannot be combined with ic.block lines");
    }
    c.ic_protocol = protocol;
    for (const auto& e : blocks) {
        // ic.block = <u|v> <x_lo> <x_hi> <level> [release_time]
        std::istringstream bs(e.value);
        std::vector<std::string> tok;
        for (std::string t; bs >> t;) tok.push_back(t);
        if (tok.size() != 4 && tok.size() != 5)
            rd.fail(e.line, "key 'ic.block': expected '<u|v> <x_lo> <x_hi> <level> [release_time]', found '" + e.value + "'");
        Block blk;
        const auto f = lower(tok[0]);
        if (f == "u") blk.field = Field::U;
        else if (f == "v") blk.field = Field::V;
        else rd.fail(e.line, "key 'ic.block': field must be u or v, found '" + tok[0] + "'");
        blk.x_lo = rd.number("ic.block", {tok[1], e.line});
        blk.x_hi = rd.number("ic.block", {tok[2], e.line});
        blk.level = rd.in_closed_unit("ic.block", {tok[3], e.line});
        blk.release_time = tok.size() == 5 ? rd.number("ic.block", {tok[4], e.line}) : 0.0;
        if (blk.x_hi < blk.x_lo) rd.fail(e.line, "key 'ic.block': x_hi < x_lo");
        if (blk.release_time < 0) rd.fail(e.line, "key 'ic.block': release_time must be >= 0");
        c.custom_blocks.push_back(blk);
    }

    if (kv.count("drift.profile")) {
        const auto v = lower(kv["drift.profile"].value);
        if (v == "none") c.drift.profile = DriftProfile::None;
        else if (v == "tanh") c.drift.profile = DriftProfile::Tanh;
        else if (v == "exp") c.drift.profile = DriftProfile::Exp;
        else rd.fail(kv["drift.profile"].line, "key 'drift.profile': expected none, tanh or exp, found '" +
                                                   kv["drift.profile"].value + "'");
    }
    if (kv.count("drift.n_left")) c.drift.n_left = rd.positive("drift.n_left", kv["drift.n_left"]);
    if (kv.count("drift.n_right")) c.drift.n_right = rd.positive("drift.n_right", kv["drift.n_right"]);
    if (kv.count("drift.center")) c.drift.center = rd.number("drift.center", kv["drift.center"]);
    if (kv.count("drift.width")) c.drift.width = rd.positive("drift.width", kv["drift.width"]);
    if (kv.count("drift.slope")) c.drift.slope = rd.number("drift.slope", kv["drift.slope"]);
    if (c.drift.profile != DriftProfile::None && variant == Variant::Nagylaki)
        rd.fail(kv["drift.profile"].line, "a prescribed n profile does not apply to variant nagylaki (n evolves)");

    if (kv.count("nagylaki.n0")) c.nagylaki_n0 = rd.positive("nagylaki.n0", kv["nagylaki.n0"]);

    if (kv.count("output.dir")) c.out_dir = kv["output.dir"].value;
    if (kv.count("output.snapshots")) {
        c.snapshot_times = rd.list("output.snapshots", kv["output.snapshots"]);
        for (double t : c.snapshot_times)
            if (t < 0 || t > c.grid.T_end)
                rd.fail(kv["output.snapshots"].line, "key 'output.snapshots': times must lie in [0, grid.T_end]");
    }
    if (kv.count("output.raster_interval"))
        c.raster_interval = rd.positive("output.raster_interval", kv["output.raster_interval"]);
    if (kv.count("output.pgm")) c.write_pgm = rd.boolean("output.pgm", kv["output.pgm"]);

    if (kv.count("front.level_u")) c.thresholds.level_u = rd.in_open_unit("front.level_u", kv["front.level_u"]);
    if (kv.count("front.level_v")) c.thresholds.level_v = rd.in_open_unit("front.level_v", kv["front.level_v"]);
    if (kv.count("thresholds.eps_ext"))
        c.thresholds.eps_ext = rd.in_open_unit("thresholds.eps_ext", kv["thresholds.eps_ext"]);
    if (kv.count("thresholds.persist_v"))
        c.thresholds.persist_v = rd.in_open_unit("thresholds.persist_v", kv["thresholds.persist_v"]);
    if (kv.count("thresholds.trailing_window"))
        c.thresholds.trailing_window = rd.positive("thresholds.trailing_window", kv["thresholds.trailing_window"]);

    if (kv.count("phase.n_starts")) {
        const long n = rd.integer("phase.n_starts", kv["phase.n_starts"]);
        if (n < 1) rd.fail(kv["phase.n_starts"].line, "key 'phase.n_starts': expected an integer >= 1");
        c.phase.n_starts = int(n);
    }
    if (kv.count("phase.t_end")) c.phase.t_end = rd.positive("phase.t_end", kv["phase.t_end"]);
    if (kv.count("phase.tail_fraction")) {
        const double f = rd.number("phase.tail_fraction", kv["phase.tail_fraction"]);
        if (!(f > 0 && f <= 1)) rd.fail(kv["phase.tail_fraction"].line, "key 'phase.tail_fraction': expected a value in (0,1]");
        c.phase.tail_fraction = f;
    }
    if (kv.count("phase.sample_interval"))
        c.phase.sample_interval = rd.positive("phase.sample_interval", kv["phase.sample_interval"]);
    c.phase.seed = c.seed;

    for (const char* key : {"sweep.a", "sweep.b"}) {
        if (!kv.count(key)) continue;
        auto vals = rd.list(key, kv[key]);
        for (double x : vals)
            if (!(x > 0 && x < 1)) rd.fail(kv[key].line, std::string("key '") + key + "': values must lie in (0,1)");
        (std::string(key) == "sweep.a" ? c.sweep_a : c.sweep_b) = std::move(vals);
    }
    return c;
}

RunConfig parse_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path.string());
}

}  // namespace drivebrake::cli
