#include "levylab/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace levylab {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(int line, const std::string& message) {
    throw std::invalid_argument("config line " + std::to_string(line) + ": " + message);
}

double parse_double(const std::string& v, int line) {
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        fail(line, "expected a number, got '" + v + "'");
    }
    if (used != v.size()) fail(line, "trailing characters after number '" + v + "'");
    return out;
}

int parse_int(const std::string& v, int line) {
    std::size_t used = 0;
    long out = 0;
    try {
        out = std::stol(v, &used);
    } catch (const std::exception&) {
        fail(line, "expected an integer, got '" + v + "'");
    }
    if (used != v.size()) fail(line, "trailing characters after integer '" + v + "'");
    return static_cast<int>(out);
}

std::uint64_t parse_seed(const std::string& v, int line) {
    std::size_t used = 0;
    unsigned long long out = 0;
    try {
        out = std::stoull(v, &used);
    } catch (const std::exception&) {
        fail(line, "expected a nonnegative integer seed, got '" + v + "'");
    }
    if (used != v.size()) fail(line, "trailing characters after seed '" + v + "'");
    return out;
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail(line, "expected true/false, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& v, int line) {
    std::vector<double> out;
    std::string item;
    std::istringstream stream(v);
    while (std::getline(stream, item, ',')) {
        item = trim(item);
        if (item.empty()) fail(line, "empty entry in list");
        out.push_back(parse_double(item, line));
    }
    return out;
}

const std::set<std::string> kFamilies = {"cauchy", "bessel_k1", "alpha", "tabulated",
                                         "harmonic_oscillator"};

} // namespace

PipelineConfig parse_config_text(const std::string& text) {
    PipelineConfig cfg;
    std::istringstream stream(text);
    std::string raw;
    std::string section;
    int line_no = 0;

    while (std::getline(stream, raw)) {
        ++line_no;
        const auto comment = raw.find('#');
        if (comment != std::string::npos) raw.erase(comment);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            static const std::set<std::string> known = {"model",   "grid",    "inversion",
                                                        "spectrum", "chi2",   "sampler",
                                                        "output",  "run"};
            if (!known.count(section)) fail(line_no, "unknown section [" + section + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(line_no, "empty key");
        if (section.empty()) fail(line_no, "key outside any [section]");

        if (section == "model") {
            if (key == "family") {
                if (!kFamilies.count(value)) fail(line_no, "unknown family '" + value + "'");
                cfg.model.family = value;
            } else if (key == "a") cfg.model.a = parse_double(value, line_no);
            else if (key == "b") cfg.model.b = parse_double(value, line_no);
            else if (key == "rho") cfg.model.rho = parse_double(value, line_no);
            else if (key == "alpha") cfg.model.alpha = parse_double(value, line_no);
            else if (key == "omega") cfg.model.omega = parse_double(value, line_no);
            else if (key == "analytic") cfg.model.analytic = parse_bool(value, line_no);
            else if (key == "table") cfg.model.table = value;
            else fail(line_no, "unknown key '" + key + "' in [model]");
        } else if (section == "grid") {
            if (key == "half_width") cfg.grid.half_width = parse_double(value, line_no);
            else if (key == "points") cfg.grid.points = parse_int(value, line_no);
            else fail(line_no, "unknown key '" + key + "' in [grid]");
        } else if (section == "inversion") {
            if (key == "s_max_initial") cfg.inversion.s_max_initial = parse_double(value, line_no);
            else if (key == "c_tail_threshold")
                cfg.inversion.c_tail_threshold = parse_double(value, line_no);
            else if (key == "oversampling") cfg.inversion.oversampling = parse_int(value, line_no);
            else if (key == "clip_fraction") cfg.inversion.clip_fraction = parse_double(value, line_no);
            else if (key == "mass_tolerance")
                cfg.inversion.mass_tolerance = parse_double(value, line_no);
            else fail(line_no, "unknown key '" + key + "' in [inversion]");
        } else if (section == "spectrum") {
            if (key == "states") cfg.spectrum.states = parse_int(value, line_no);
            else if (key == "margin") cfg.spectrum.margin = parse_int(value, line_no);
            else fail(line_no, "unknown key '" + key + "' in [spectrum]");
        } else if (section == "chi2") {
            if (key == "t_values") cfg.chi2.t_values = parse_list(value, line_no);
            else if (key == "convergence_tolerance")
                cfg.chi2.convergence_tolerance = parse_double(value, line_no);
            else if (key == "energy_scale") cfg.chi2.energy_scale = parse_double(value, line_no);
            else fail(line_no, "unknown key '" + key + "' in [chi2]");
        } else if (section == "sampler") {
            if (key == "enabled") cfg.sampler.enabled = parse_bool(value, line_no);
            else if (key == "paths") cfg.sampler.paths = parse_int(value, line_no);
            else if (key == "dt") cfg.sampler.dt = parse_double(value, line_no);
            else if (key == "steps") cfg.sampler.steps = parse_int(value, line_no);
            else if (key == "windows") cfg.sampler.windows = parse_list(value, line_no);
            else if (key == "lags") cfg.sampler.lags = parse_list(value, line_no);
            else fail(line_no, "unknown key '" + key + "' in [sampler]");
        } else if (section == "output") {
            if (key == "directory") cfg.output.directory = value;
            else if (key == "eigenfunctions") cfg.output.eigenfunctions = parse_bool(value, line_no);
            else fail(line_no, "unknown key '" + key + "' in [output]");
        } else { // run
            if (key == "seed") cfg.seed = parse_seed(value, line_no);
            else fail(line_no, "unknown key '" + key + "' in [run]");
        }
    }
    return cfg;
}

PipelineConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

// ---- JSON round trip --------------------------------------------------------

std::string config_to_json(const PipelineConfig& cfg) {
    ordered_json j;
    j["model"] = {{"family", cfg.model.family}, {"a", cfg.model.a},       {"b", cfg.model.b},
                  {"rho", cfg.model.rho},       {"alpha", cfg.model.alpha},
                  {"omega", cfg.model.omega},   {"analytic", cfg.model.analytic},
                  {"table", cfg.model.table}};
    j["grid"] = {{"half_width", cfg.grid.half_width}, {"points", cfg.grid.points}};
    j["inversion"] = {{"s_max_initial", cfg.inversion.s_max_initial},
                      {"c_tail_threshold", cfg.inversion.c_tail_threshold},
                      {"oversampling", cfg.inversion.oversampling},
                      {"clip_fraction", cfg.inversion.clip_fraction},
                      {"mass_tolerance", cfg.inversion.mass_tolerance}};
    j["spectrum"] = {{"states", cfg.spectrum.states}, {"margin", cfg.spectrum.margin}};
    j["chi2"] = {{"t_values", cfg.chi2.t_values},
                 {"convergence_tolerance", cfg.chi2.convergence_tolerance}};
    if (cfg.chi2.energy_scale) j["chi2"]["energy_scale"] = *cfg.chi2.energy_scale;
    else j["chi2"]["energy_scale"] = nullptr;
    j["sampler"] = {{"enabled", cfg.sampler.enabled}, {"paths", cfg.sampler.paths},
                    {"dt", cfg.sampler.dt},           {"steps", cfg.sampler.steps},
                    {"windows", cfg.sampler.windows}, {"lags", cfg.sampler.lags}};
    j["output"] = {{"directory", cfg.output.directory},
                   {"eigenfunctions", cfg.output.eigenfunctions}};
    j["seed"] = cfg.seed;
    return j.dump(2);
}

PipelineConfig config_from_json(const std::string& json_text) {
    const ordered_json j = ordered_json::parse(json_text);
    PipelineConfig cfg;
    const auto& m = j.at("model");
    cfg.model.family = m.at("family").get<std::string>();
    if (!kFamilies.count(cfg.model.family))
        throw std::invalid_argument("config json: unknown family '" + cfg.model.family + "'");
    cfg.model.a = m.at("a").get<double>();
    cfg.model.b = m.at("b").get<double>();
    cfg.model.rho = m.at("rho").get<double>();
    cfg.model.alpha = m.at("alpha").get<double>();
    cfg.model.omega = m.at("omega").get<double>();
    cfg.model.analytic = m.at("analytic").get<bool>();
    cfg.model.table = m.at("table").get<std::string>();

    const auto& g = j.at("grid");
    cfg.grid.half_width = g.at("half_width").get<double>();
    cfg.grid.points = g.at("points").get<int>();

    const auto& inv = j.at("inversion");
    cfg.inversion.s_max_initial = inv.at("s_max_initial").get<double>();
    cfg.inversion.c_tail_threshold = inv.at("c_tail_threshold").get<double>();
    cfg.inversion.oversampling = inv.at("oversampling").get<int>();
    cfg.inversion.clip_fraction = inv.at("clip_fraction").get<double>();
    cfg.inversion.mass_tolerance = inv.at("mass_tolerance").get<double>();

    const auto& sp = j.at("spectrum");
    cfg.spectrum.states = sp.at("states").get<int>();
    cfg.spectrum.margin = sp.at("margin").get<int>();

    const auto& chi = j.at("chi2");
    cfg.chi2.t_values = chi.at("t_values").get<std::vector<double>>();
    cfg.chi2.convergence_tolerance = chi.at("convergence_tolerance").get<double>();
    if (!chi.at("energy_scale").is_null())
        cfg.chi2.energy_scale = chi.at("energy_scale").get<double>();

    const auto& sam = j.at("sampler");
    cfg.sampler.enabled = sam.at("enabled").get<bool>();
    cfg.sampler.paths = sam.at("paths").get<int>();
    cfg.sampler.dt = sam.at("dt").get<double>();
    cfg.sampler.steps = sam.at("steps").get<int>();
    cfg.sampler.windows = sam.at("windows").get<std::vector<double>>();
    cfg.sampler.lags = sam.at("lags").get<std::vector<double>>();

    const auto& o = j.at("output");
    cfg.output.directory = o.at("directory").get<std::string>();
    cfg.output.eigenfunctions = o.at("eigenfunctions").get<bool>();

    cfg.seed = j.at("seed").get<std::uint64_t>();
    return cfg;
}

} // namespace levylab
