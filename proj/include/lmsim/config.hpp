#pragma once

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lmsim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class TopologyKind { random, circular, graph };

// Full market configuration. Defaults reproduce the base-case market:
// five syndicates, twenty-five brokers, attritional losses, premium
// exposure management, no syndication.
struct ScenarioConfig {
    // market shape
    int num_syndicates = 5;
    int num_brokers = 25;
    int horizon_years = 50;

    // broker / risks
    double risks_per_day = 0.06; // Poisson mean per broker-day
    int num_peril_regions = 10;
    double risk_limit = 10'000'000.0;

    // broker-syndicate network
    TopologyKind topology = TopologyKind::random;
    int lead_top_k = 2;
    int follow_top_k = 0;

    // attritional loss generator
    double yearly_claim_frequency = 0.1; // per policy-year
    double attritional_cov = 1.0;
    double attritional_mean_severity = 3'000'000.0;

    // catastrophe loss generator
    double catastrophe_events_per_year = 0.05;
    double pareto_shape = 5.0;
    double min_catastrophe_damage_fraction = 0.25; // of risk limit
    double catastrophe_cap_multiple = 10.0;        // upper truncation, in units of the minimum

    // syndicate
    double initial_capital = 10'000'000.0;
    double default_lead_line_size = 1.0; // 0.5 when syndication is on
    double default_follow_line_size = 0.1;
    double dividend_profit_fraction = 0.4;

    // actuarial pricing
    double internal_experience_weight = 0.5; // z
    double loss_recency_weight = 0.2;        // EWMA weight
    double volatility_weight = 0.0;          // risk loading on claims std dev
    double initial_industry_frequency = 0.1; // bootstrap prior, see README
    double initial_industry_severity = 3'000'000.0;

    // underwriter markup
    double markup_recency_weight = 0.2;
    double markup_sensitivity = 1.0;     // gain on the win-rate innovation
    double markup_target_win_rate = 0.5;

    // premium exposure management
    double premium_reserve_ratio = 0.5;     // premiums-to-reserved-capital
    double min_capital_reserve_ratio = 1.0; // reserved-to-working cap
    double max_premium_scaling = 1.0;

    // VaR exposure management
    double var_exceedance_probability = 0.05;
    double var_safety_factor = 1.0;
    int var_em_mc_samples = 100'000;

    // feature toggles
    bool attritional_losses = true;
    bool catastrophe_losses = false;
    bool premium_em = true;
    bool var_em = false;
    bool lead_follow = false;
    bool underwriter_markup = false;

    int horizon_days() const { return horizon_years * 360; }
};

inline const std::vector<std::string>& scenario_preset_names() {
    static const std::vector<std::string> names = {"scenario1", "scenario2", "scenario3",
                                                   "scenario4"};
    return names;
}

// The four experiment presets. They differ only in which loss generators,
// exposure-management styles and syndication features are switched on.
inline ScenarioConfig preset_config(const std::string& name) {
    ScenarioConfig cfg; // scenario1 baseline
    cfg.dividend_profit_fraction = 0.0; // venting is not part of the four experiments
    if (name == "scenario1") {
        // attritional only, premium EM, no syndication
    } else if (name == "scenario2") {
        cfg.catastrophe_losses = true;
    } else if (name == "scenario3") {
        cfg.catastrophe_losses = true;
        cfg.premium_em = false;
        cfg.var_em = true;
    } else if (name == "scenario4") {
        cfg.lead_follow = true;
        cfg.default_lead_line_size = 0.5;
        cfg.follow_top_k = 5;
    } else {
        throw ConfigError("unknown preset: " + name);
    }
    return cfg;
}

namespace detail {

struct FieldBinding {
    std::function<std::string(const ScenarioConfig&)> get;
    std::function<void(ScenarioConfig&, const std::string&)> set;
    bool preset_pinned = false; // part of a preset's definition
};

inline bool parse_bool(const std::string& key, const std::string& raw) {
    if (raw == "true" || raw == "on" || raw == "1" || raw == "yes") return true;
    if (raw == "false" || raw == "off" || raw == "0" || raw == "no") return false;
    throw ConfigError(key + ": expected a boolean, got '" + raw + "'");
}

inline double parse_double(const std::string& key, const std::string& raw) {
    try {
        std::size_t pos = 0;
        double v = std::stod(raw, &pos);
        if (pos != raw.size()) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + raw + "'");
    }
}

inline int parse_int(const std::string& key, const std::string& raw) {
    try {
        std::size_t pos = 0;
        long v = std::stol(raw, &pos);
        if (pos != raw.size()) throw std::invalid_argument(raw);
        return static_cast<int>(v);
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got '" + raw + "'");
    }
}

inline std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

inline const std::map<std::string, FieldBinding>& field_bindings() {
    static const std::map<std::string, FieldBinding> bindings = [] {
        std::map<std::string, FieldBinding> b;
        auto add_int = [&](const std::string& key, int ScenarioConfig::* member, bool pinned = false) {
            b[key] = FieldBinding{
                [member](const ScenarioConfig& c) { return std::to_string(c.*member); },
                [member, key](ScenarioConfig& c, const std::string& raw) { c.*member = parse_int(key, raw); },
                pinned};
        };
        auto add_double = [&](const std::string& key, double ScenarioConfig::* member, bool pinned = false) {
            b[key] = FieldBinding{
                [member](const ScenarioConfig& c) { return format_double(c.*member); },
                [member, key](ScenarioConfig& c, const std::string& raw) { c.*member = parse_double(key, raw); },
                pinned};
        };
        auto add_bool = [&](const std::string& key, bool ScenarioConfig::* member, bool pinned = false) {
            b[key] = FieldBinding{
                [member](const ScenarioConfig& c) { return std::string(c.*member ? "on" : "off"); },
                [member, key](ScenarioConfig& c, const std::string& raw) { c.*member = parse_bool(key, raw); },
                pinned};
        };

        add_int("num_syndicates", &ScenarioConfig::num_syndicates);
        add_int("num_brokers", &ScenarioConfig::num_brokers);
        add_int("horizon_years", &ScenarioConfig::horizon_years, true);
        add_double("risks_per_day", &ScenarioConfig::risks_per_day, true);
        add_int("num_peril_regions", &ScenarioConfig::num_peril_regions, true);
        add_double("risk_limit", &ScenarioConfig::risk_limit, true);
        add_int("lead_top_k", &ScenarioConfig::lead_top_k, true);
        add_int("follow_top_k", &ScenarioConfig::follow_top_k, true);
        add_double("yearly_claim_frequency", &ScenarioConfig::yearly_claim_frequency, true);
        add_double("attritional_cov", &ScenarioConfig::attritional_cov, true);
        add_double("attritional_mean_severity", &ScenarioConfig::attritional_mean_severity, true);
        add_double("catastrophe_events_per_year", &ScenarioConfig::catastrophe_events_per_year, true);
        add_double("pareto_shape", &ScenarioConfig::pareto_shape, true);
        add_double("min_catastrophe_damage_fraction", &ScenarioConfig::min_catastrophe_damage_fraction, true);
        add_double("catastrophe_cap_multiple", &ScenarioConfig::catastrophe_cap_multiple);
        add_double("initial_capital", &ScenarioConfig::initial_capital, true);
        add_double("default_lead_line_size", &ScenarioConfig::default_lead_line_size, true);
        add_double("default_follow_line_size", &ScenarioConfig::default_follow_line_size, true);
        add_double("dividend_profit_fraction", &ScenarioConfig::dividend_profit_fraction);
        add_double("internal_experience_weight", &ScenarioConfig::internal_experience_weight, true);
        add_double("loss_recency_weight", &ScenarioConfig::loss_recency_weight, true);
        add_double("volatility_weight", &ScenarioConfig::volatility_weight, true);
        add_double("initial_industry_frequency", &ScenarioConfig::initial_industry_frequency);
        add_double("initial_industry_severity", &ScenarioConfig::initial_industry_severity);
        add_double("markup_recency_weight", &ScenarioConfig::markup_recency_weight);
        add_double("markup_sensitivity", &ScenarioConfig::markup_sensitivity);
        add_double("markup_target_win_rate", &ScenarioConfig::markup_target_win_rate);
        add_double("premium_reserve_ratio", &ScenarioConfig::premium_reserve_ratio, true);
        add_double("min_capital_reserve_ratio", &ScenarioConfig::min_capital_reserve_ratio, true);
        add_double("max_premium_scaling", &ScenarioConfig::max_premium_scaling, true);
        add_double("var_exceedance_probability", &ScenarioConfig::var_exceedance_probability, true);
        add_double("var_safety_factor", &ScenarioConfig::var_safety_factor, true);
        add_int("var_em_mc_samples", &ScenarioConfig::var_em_mc_samples);
        add_bool("attritional_losses", &ScenarioConfig::attritional_losses, true);
        add_bool("catastrophe_losses", &ScenarioConfig::catastrophe_losses, true);
        add_bool("premium_em", &ScenarioConfig::premium_em, true);
        add_bool("var_em", &ScenarioConfig::var_em, true);
        add_bool("lead_follow", &ScenarioConfig::lead_follow, true);
        add_bool("underwriter_markup", &ScenarioConfig::underwriter_markup, true);

        b["topology"] = FieldBinding{
            [](const ScenarioConfig& c) -> std::string {
                switch (c.topology) {
                    case TopologyKind::circular: return "circular";
                    case TopologyKind::graph: return "graph";
                    default: return "random";
                }
            },
            [](ScenarioConfig& c, const std::string& raw) {
                if (raw == "random") c.topology = TopologyKind::random;
                else if (raw == "circular") c.topology = TopologyKind::circular;
                else if (raw == "graph") c.topology = TopologyKind::graph;
                else throw ConfigError("topology: expected random|circular|graph, got '" + raw + "'");
            },
            false};
        return b;
    }();
    return bindings;
}

} // namespace detail

inline void apply_config_entry(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
    const auto& bindings = detail::field_bindings();
    auto it = bindings.find(key);
    if (it == bindings.end()) throw ConfigError("unknown config key: " + key);
    it->second.set(cfg, value);
}

// key = value lines; '#' starts a comment; blank lines ignored.
inline std::map<std::string, std::string> parse_config_text(std::istream& in) {
    std::map<std::string, std::string> entries;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const char* ws = " \t\r";
        auto b = s.find_first_not_of(ws);
        if (b == std::string::npos) return std::string();
        auto e = s.find_last_not_of(ws);
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        if (entries.count(key))
            throw ConfigError("duplicate config key: " + key);
        entries[key] = value;
    }
    return entries;
}

// Range checks; every violation names the offending field.
inline void validate_config(const ScenarioConfig& c) {
    auto require = [](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError(msg);
    };
    require(c.num_syndicates >= 0, "num_syndicates: must be >= 0");
    require(c.num_brokers >= 0, "num_brokers: must be >= 0");
    require(c.horizon_years >= 1, "horizon_years: must be >= 1");
    require(c.risks_per_day >= 0, "risks_per_day: must be >= 0");
    require(c.num_peril_regions >= 1, "num_peril_regions: must be >= 1");
    require(c.risk_limit > 0, "risk_limit: must be > 0");
    require(c.lead_top_k >= 1, "lead_top_k: must be >= 1");
    require(c.follow_top_k >= 0, "follow_top_k: must be >= 0");
    require(c.yearly_claim_frequency >= 0, "yearly_claim_frequency: must be >= 0");
    require(c.attritional_cov > 0, "attritional_cov: must be > 0");
    require(c.attritional_mean_severity > 0, "attritional_mean_severity: must be > 0");
    require(c.catastrophe_events_per_year >= 0, "catastrophe_events_per_year: must be >= 0");
    require(c.pareto_shape > 1, "pareto_shape: must be > 1 for a finite mean");
    require(c.min_catastrophe_damage_fraction > 0 && c.min_catastrophe_damage_fraction <= 1,
            "min_catastrophe_damage_fraction: must be in (0, 1]");
    require(c.catastrophe_cap_multiple > 1, "catastrophe_cap_multiple: must be > 1");
    require(c.initial_capital > 0, "initial_capital: must be > 0");
    require(c.default_lead_line_size > 0 && c.default_lead_line_size <= 1,
            "default_lead_line_size: must be in (0, 1]");
    require(c.default_follow_line_size > 0 && c.default_follow_line_size <= 1,
            "default_follow_line_size: must be in (0, 1]");
    require(c.dividend_profit_fraction >= 0 && c.dividend_profit_fraction <= 1,
            "dividend_profit_fraction: must be in [0, 1]");
    require(c.internal_experience_weight >= 0 && c.internal_experience_weight <= 1,
            "internal_experience_weight: must be in [0, 1]");
    require(c.loss_recency_weight > 0 && c.loss_recency_weight <= 1,
            "loss_recency_weight: must be in (0, 1]");
    require(c.volatility_weight >= 0, "volatility_weight: must be >= 0");
    require(c.initial_industry_frequency >= 0, "initial_industry_frequency: must be >= 0");
    require(c.initial_industry_severity >= 0, "initial_industry_severity: must be >= 0");
    require(c.markup_recency_weight >= 0 && c.markup_recency_weight <= 1,
            "markup_recency_weight: must be in [0, 1]");
    require(c.markup_target_win_rate >= 0 && c.markup_target_win_rate <= 1,
            "markup_target_win_rate: must be in [0, 1]");
    require(c.premium_reserve_ratio > 0, "premium_reserve_ratio: must be > 0");
    require(c.min_capital_reserve_ratio > 0, "min_capital_reserve_ratio: must be > 0");
    require(c.max_premium_scaling >= 1, "max_premium_scaling: must be >= 1");
    require(c.var_exceedance_probability > 0 && c.var_exceedance_probability < 1,
            "var_exceedance_probability: must be in (0, 1)");
    require(c.var_safety_factor >= 0, "var_safety_factor: must be >= 0");
    if (c.var_em)
        require(c.var_em_mc_samples >= 1000, "var_em_mc_samples: must be >= 1000");
}

struct ConfigSources {
    std::string preset;                              // optional
    std::map<std::string, std::string> file_entries; // optional
    std::map<std::string, std::string> env_entries;  // optional, wins over file
};

// Layering: preset (if any), then file entries, then environment
// overrides. Overriding a key that a preset pins to a different value is
// a conflict and rejected; restating the preset value is allowed.
inline ScenarioConfig build_config(const ConfigSources& sources) {
    ScenarioConfig cfg;
    bool has_preset = !sources.preset.empty();
    if (has_preset) cfg = preset_config(sources.preset);

    const auto& bindings = detail::field_bindings();
    auto apply = [&](const std::map<std::string, std::string>& entries, const char* origin) {
        for (const auto& [key, value] : entries) {
            auto it = bindings.find(key);
            if (it == bindings.end())
                throw ConfigError(std::string(origin) + ": unknown config key: " + key);
            if (has_preset && it->second.preset_pinned) {
                ScenarioConfig probe = cfg;
                it->second.set(probe, value);
                if (it->second.get(probe) != it->second.get(cfg))
                    throw ConfigError(key + ": conflicts with preset " + sources.preset);
            }
            it->second.set(cfg, value);
        }
    };
    apply(sources.file_entries, "config file");
    apply(sources.env_entries, "environment");
    validate_config(cfg);
    return cfg;
}

inline constexpr const char* env_prefix = "LMSIM_";

// Collects LMSIM_<UPPERCASED_KEY> overrides for every known config key.
inline std::map<std::string, std::string> env_overrides(
    const std::function<const char*(const char*)>& getenv_fn = [](const char* k) {
        return std::getenv(k);
    }) {
    std::map<std::string, std::string> entries;
    for (const auto& [key, binding] : detail::field_bindings()) {
        (void)binding;
        std::string env_key = env_prefix;
        for (char ch : key) env_key += static_cast<char>(ch == '-' ? '_' : std::toupper(ch));
        if (const char* value = getenv_fn(env_key.c_str())) entries[key] = value;
    }
    return entries;
}

inline ScenarioConfig load_config_file(const std::string& path, const std::string& preset = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    ConfigSources sources;
    sources.preset = preset;
    sources.file_entries = parse_config_text(in);
    sources.env_entries = env_overrides();
    return build_config(sources);
}

} // namespace lmsim
