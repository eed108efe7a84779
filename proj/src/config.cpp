#include "covop/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "covop/errors.hpp"

namespace covop {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool valid_key(const std::string& key) {
    if (key.empty()) return false;
    for (char c : key)
        if (!(std::islower(static_cast<unsigned char>(c)) ||
              std::isdigit(static_cast<unsigned char>(c)) || c == '_' ||
              c == '.'))
            return false;
    return true;
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::string cur;
    std::istringstream in(value);
    while (std::getline(in, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty()) items.push_back(cur);
    }
    return items;
}

// Typed readers over a ConfigMap that tick off consumed keys so leftovers
// can be reported as unknown.
struct SchemaReader {
    const ConfigMap& map;
    std::map<std::string, bool> consumed;

    explicit SchemaReader(const ConfigMap& m) : map(m) {
        for (const auto& [k, v] : map.values) consumed[k] = false;
    }

    const std::string* find(const std::string& key) {
        auto it = map.values.find(key);
        if (it == map.values.end()) return nullptr;
        consumed[key] = true;
        return &it->second;
    }

    void read_string(const std::string& key, std::string& out) {
        if (const std::string* v = find(key)) out = *v;
    }

    void read_int(const std::string& key, int& out) {
        const std::string* v = find(key);
        if (!v) return;
        out = parse_int(key, *v);
    }

    void read_u64(const std::string& key, std::uint64_t& out) {
        const std::string* v = find(key);
        if (!v) return;
        // strtoull wraps negative input instead of failing; reject it here.
        if (v->find('-') != std::string::npos)
            throw ConfigError("key '" + key + "': '" + *v +
                              "' is not an unsigned integer");
        errno = 0;
        char* end = nullptr;
        unsigned long long parsed = std::strtoull(v->c_str(), &end, 10);
        if (errno != 0 || end == v->c_str() || *end != '\0')
            throw ConfigError("key '" + key + "': '" + *v +
                              "' is not an unsigned integer");
        out = parsed;
    }

    void read_double(const std::string& key, double& out) {
        const std::string* v = find(key);
        if (!v) return;
        errno = 0;
        char* end = nullptr;
        double parsed = std::strtod(v->c_str(), &end);
        if (errno != 0 || end == v->c_str() || *end != '\0')
            throw ConfigError("key '" + key + "': '" + *v + "' is not a number");
        out = parsed;
    }

    void read_bool(const std::string& key, bool& out) {
        const std::string* v = find(key);
        if (!v) return;
        if (*v == "true")
            out = true;
        else if (*v == "false")
            out = false;
        else
            throw ConfigError("key '" + key + "': expected true or false, got '" +
                              *v + "'");
    }

    void read_int_list(const std::string& key, std::vector<int>& out) {
        const std::string* v = find(key);
        if (!v) return;
        out.clear();
        for (const std::string& item : split_list(*v))
            out.push_back(parse_int(key, item));
        if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    }

    void read_string_list(const std::string& key, std::vector<std::string>& out) {
        const std::string* v = find(key);
        if (!v) return;
        out = split_list(*v);
        if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    }

    static int parse_int(const std::string& key, const std::string& value) {
        errno = 0;
        char* end = nullptr;
        long parsed = std::strtol(value.c_str(), &end, 10);
        if (errno != 0 || end == value.c_str() || *end != '\0' ||
            parsed < -2147483647L || parsed > 2147483647L)
            throw ConfigError("key '" + key + "': '" + value +
                              "' is not an integer");
        return static_cast<int>(parsed);
    }

    void reject_unknown() const {
        for (const auto& [key, used] : consumed)
            if (!used) throw ConfigError("unknown config key '" + key + "'");
    }
};

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

}  // namespace

const std::string& ConfigMap::get(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw ConfigError("missing config key '" + key + "'");
    return it->second;
}

ConfigMap parse_config(const std::string& text) {
    ConfigMap map;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (!valid_key(key))
            throw ConfigError("line " + std::to_string(lineno) +
                              ": malformed key '" + key + "'");
        if (value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": key '" + key +
                              "' has no value");
        if (map.values.count(key))
            throw ConfigError("line " + std::to_string(lineno) +
                              ": duplicate key '" + key + "'");
        map.values[key] = value;
    }
    return map;
}

ConfigMap read_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string write_config(const ConfigMap& map) {
    std::string out;
    for (const auto& [key, value] : map.values)
        out += key + " = " + value + "\n";
    return out;
}

ExperimentConfig experiment_from_config(const ConfigMap& map) {
    SchemaReader r(map);
    ExperimentConfig cfg;

    r.read_string("domain.name", cfg.domain);
    r.read_string("domain.layout", cfg.layout);
    r.read_int("domain.discs", cfg.discs);
    r.read_int("domain.v_max", cfg.v_max);

    r.read_string_list("discover.method", cfg.methods);
    r.read_int("discover.options", cfg.option_count);
    std::string protocol = "offline-exact";
    r.read_string("discover.protocol", protocol);
    r.read_bool("discover.widened", cfg.widened);
    r.read_int("discover.trajectories", cfg.trajectories);
    r.read_int("discover.steps_per_trajectory", cfg.steps_per_trajectory);
    r.read_int("discover.interval_steps", cfg.interval_steps);
    r.read_int("discover.batch", cfg.batch);
    r.read_int("discover.max_options", cfg.max_options);

    r.read_int("learn.episodes", cfg.episodes);
    r.read_int("learn.max_steps", cfg.max_steps);
    r.read_double("learn.alpha", cfg.alpha);
    r.read_double("learn.gamma", cfg.gamma);
    r.read_double("learn.epsilon", cfg.epsilon);
    r.read_int("learn.runs", cfg.runs);
    r.read_int_list("learn.counts", cfg.counts);

    r.read_int("covertime.trajectories", cfg.covertime_trajectories);

    r.read_int("study.num_graphs", cfg.num_graphs);
    r.read_int("study.graph_size", cfg.graph_size);
    r.read_double("study.density", cfg.density);
    r.read_int("study.trajectories", cfg.study_trajectories);

    r.read_string("draw.graph", cfg.graph_path);

    r.read_u64("seed", cfg.seed);
    r.read_string("out", cfg.out_dir);
    r.read_bool("plot", cfg.plot);

    r.reject_unknown();

    // Value validation.
    require(cfg.domain == "grid" || cfg.domain == "taxi" ||
                cfg.domain == "hanoi" || cfg.domain == "racetrack" ||
                cfg.domain == "maze",
            "domain.name must be grid, taxi, hanoi, racetrack, or maze; got '" +
                cfg.domain + "'");
    require(cfg.discs >= 1, "domain.discs must be positive");
    require(cfg.v_max >= 1, "domain.v_max must be positive");

    for (const std::string& m : cfg.methods)
        require(m == "covering" || m == "eigen" || m == "betweenness" ||
                    m == "none",
                "discover.method entries must be covering, eigen, betweenness, "
                "or none; got '" +
                    m + "'");
    require(cfg.option_count >= 0 && cfg.option_count % 2 == 0,
            "discover.options must be even and non-negative");
    if (protocol == "offline-exact")
        cfg.protocol = Protocol::offline_exact;
    else if (protocol == "offline-sampled")
        cfg.protocol = Protocol::offline_sampled;
    else if (protocol == "online")
        cfg.protocol = Protocol::online;
    else
        throw ConfigError(
            "discover.protocol must be offline-exact, offline-sampled, or "
            "online; got '" +
            protocol + "'");
    require(cfg.trajectories >= 1, "discover.trajectories must be positive");
    require(cfg.steps_per_trajectory >= 1,
            "discover.steps_per_trajectory must be positive");
    require(cfg.interval_steps >= 1, "discover.interval_steps must be positive");
    require(cfg.batch >= 2 && cfg.batch % 2 == 0,
            "discover.batch must be even and at least 2");
    require(cfg.max_options >= 0, "discover.max_options must be non-negative");

    require(cfg.episodes >= 1, "learn.episodes must be positive");
    require(cfg.max_steps >= 1, "learn.max_steps must be positive");
    require(cfg.alpha > 0.0 && cfg.alpha <= 1.0, "learn.alpha must be in (0, 1]");
    require(cfg.gamma > 0.0 && cfg.gamma <= 1.0, "learn.gamma must be in (0, 1]");
    require(cfg.epsilon >= 0.0 && cfg.epsilon <= 1.0,
            "learn.epsilon must be in [0, 1]");
    require(cfg.runs >= 1, "learn.runs must be positive");
    for (size_t i = 0; i < cfg.counts.size(); ++i) {
        require(cfg.counts[i] >= 0 && cfg.counts[i] % 2 == 0,
                "learn.counts entries must be even and non-negative");
        if (i > 0)
            require(cfg.counts[i - 1] < cfg.counts[i],
                    "learn.counts must be strictly ascending");
    }

    require(cfg.covertime_trajectories >= 1,
            "covertime.trajectories must be positive");

    require(cfg.num_graphs >= 1, "study.num_graphs must be positive");
    require(cfg.graph_size >= 2, "study.graph_size must be at least 2");
    require(cfg.density > 0.0 && cfg.density <= 1.0,
            "study.density must be in (0, 1]");
    require(cfg.study_trajectories >= 1, "study.trajectories must be positive");

    return cfg;
}

}  // namespace covop
