#include "beircast/config.hpp"

#include "beircast/classifiers.hpp"
#include "beircast/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>

namespace beircast {

namespace {

using TomlValue = std::variant<std::string, double, std::int64_t, bool, std::vector<std::string>>;

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

TomlValue parse_scalar(const std::string& raw, const std::string& where) {
    if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
        return raw.substr(1, raw.size() - 2);
    }
    if (raw == "true") return true;
    if (raw == "false") return false;
    std::int64_t i = 0;
    auto [iptr, iec] = std::from_chars(raw.data(), raw.data() + raw.size(), i);
    if (iec == std::errc{} && iptr == raw.data() + raw.size()) return i;
    double d = 0.0;
    auto [dptr, dec] = std::from_chars(raw.data(), raw.data() + raw.size(), d);
    if (dec == std::errc{} && dptr == raw.data() + raw.size()) return d;
    throw UsageError(where + ": cannot parse value '" + raw + "'");
}

TomlValue parse_value(const std::string& raw, const std::string& where) {
    if (!raw.empty() && raw.front() == '[') {
        if (raw.back() != ']') throw UsageError(where + ": unterminated array");
        std::vector<std::string> items;
        std::string body = raw.substr(1, raw.size() - 2);
        std::string item;
        bool in_string = false;
        for (char c : body) {
            if (c == '"') in_string = !in_string;
            if (c == ',' && !in_string) {
                items.push_back(trim(item));
                item.clear();
            } else {
                item.push_back(c);
            }
        }
        if (!trim(item).empty()) items.push_back(trim(item));
        std::vector<std::string> out;
        for (auto& it : items) {
            TomlValue v = parse_scalar(it, where);
            if (auto* s = std::get_if<std::string>(&v)) {
                out.push_back(*s);
            } else {
                // Numeric arrays are stored as their literal text.
                out.push_back(it);
            }
        }
        return out;
    }
    return parse_scalar(raw, where);
}

using Sections = std::map<std::string, std::map<std::string, TomlValue>>;

Sections parse_toml(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file: " + path.string());
    Sections sections;
    std::string section;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        // Strip comments outside strings.
        bool in_string = false;
        std::string code;
        for (char c : line) {
            if (c == '"') in_string = !in_string;
            if (c == '#' && !in_string) break;
            code.push_back(c);
        }
        code = trim(code);
        if (code.empty()) continue;
        const std::string where = path.string() + ":" + std::to_string(line_no);
        if (code.front() == '[') {
            if (code.back() != ']') throw UsageError(where + ": malformed section header");
            section = trim(code.substr(1, code.size() - 2));
            if (section.empty()) throw UsageError(where + ": empty section name");
            sections[section];
            continue;
        }
        const auto eq = code.find('=');
        if (eq == std::string::npos) throw UsageError(where + ": expected key = value");
        const std::string key = trim(code.substr(0, eq));
        const std::string value = trim(code.substr(eq + 1));
        if (key.empty() || value.empty()) throw UsageError(where + ": expected key = value");
        if (section.empty()) throw UsageError(where + ": key outside any [section]");
        if (sections[section].count(key)) throw UsageError(where + ": duplicate key " + key);
        sections[section][key] = parse_value(value, where);
    }
    return sections;
}

struct SectionReader {
    const std::string section;
    std::map<std::string, TomlValue> values;

    template <typename T>
    void take(const std::string& key, T& out) {
        auto it = values.find(key);
        if (it == values.end()) return;
        if constexpr (std::is_same_v<T, int> || std::is_same_v<T, std::uint64_t>) {
            if (auto* v = std::get_if<std::int64_t>(&it->second)) {
                out = T(*v);
            } else {
                throw UsageError("config [" + section + "]." + key + ": expected integer");
            }
        } else if constexpr (std::is_same_v<T, double>) {
            if (auto* v = std::get_if<double>(&it->second)) out = *v;
            else if (auto* i = std::get_if<std::int64_t>(&it->second)) out = double(*i);
            else throw UsageError("config [" + section + "]." + key + ": expected number");
        } else if constexpr (std::is_same_v<T, bool>) {
            if (auto* v = std::get_if<bool>(&it->second)) out = *v;
            else throw UsageError("config [" + section + "]." + key + ": expected boolean");
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (auto* v = std::get_if<std::string>(&it->second)) out = *v;
            else throw UsageError("config [" + section + "]." + key + ": expected string");
        } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
            if (auto* v = std::get_if<std::vector<std::string>>(&it->second)) out = *v;
            else throw UsageError("config [" + section + "]." + key + ": expected array");
        }
        values.erase(it);
    }

    void finish() const {
        if (!values.empty()) {
            throw UsageError("config [" + section + "]: unknown key '" + values.begin()->first +
                             "'");
        }
    }
};

} // namespace

RunConfig RunConfig::load(const std::filesystem::path& path) {
    Sections sections = parse_toml(path);
    RunConfig config;

    const auto reader = [&](const std::string& name) {
        SectionReader r{name, {}};
        auto it = sections.find(name);
        if (it != sections.end()) {
            r.values = std::move(it->second);
            sections.erase(it);
        }
        return r;
    };

    {
        auto run = reader("run");
        run.take("countries", config.countries);
        run.take("seed", config.seed);
        run.take("jobs", config.jobs);
        run.finish();
    }
    {
        auto paths = reader("paths");
        paths.take("gkg_files", config.gkg_files);
        paths.take("market_csv", config.market_csv);
        paths.take("taxonomy_rules", config.taxonomy_rules);
        paths.take("out_dir", config.out_dir);
        paths.finish();
    }
    {
        auto params = reader("parameters");
        params.take("k", config.k);
        params.take("horizon", config.horizon);
        params.take("components", config.components);
        params.take("alpha", config.alpha);
        params.take("folds", config.folds);
        params.take("min_ecofin_themes", config.min_ecofin_themes);
        params.take("forward_fill_limit", config.forward_fill_limit);
        params.take("drop_unmapped", config.drop_unmapped);
        params.finish();
    }
    {
        auto cls = reader("classifiers");
        cls.take("kinds", config.classifier_kinds);
        cls.finish();
    }
    {
        auto schema = reader("gkg_schema");
        schema.take("record_id", config.schema.record_id);
        schema.take("date", config.schema.date);
        schema.take("themes", config.schema.themes);
        schema.take("locations", config.schema.locations);
        schema.take("tone", config.schema.tone);
        schema.finish();
    }
    {
        auto synth = reader("synth");
        synth.take("days", config.synth_days);
        synth.take("signal", config.synth_signal);
        synth.take("records_per_day", config.synth_records_per_day);
        synth.take("dir", config.synth_dir);
        synth.finish();
    }
    if (!sections.empty()) {
        throw UsageError("config: unknown section [" + sections.begin()->first + "]");
    }
    config.validate();
    return config;
}

void RunConfig::validate() const {
    const auto roster = default_countries();
    if (countries.empty()) throw UsageError("config: countries must be nonempty");
    for (const auto& code : countries) {
        if (!find_country(roster, code)) throw UsageError("config: unknown country " + code);
    }
    if (k < 1) throw UsageError("config: k must be >= 1");
    if (horizon < 0) throw UsageError("config: horizon must be >= 0");
    if (components < 1) throw UsageError("config: components must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("config: alpha must be in (0,1)");
    if (folds < 1) throw UsageError("config: folds must be >= 1");
    if (min_ecofin_themes < 1) throw UsageError("config: min_ecofin_themes must be >= 1");
    if (forward_fill_limit < 0) throw UsageError("config: forward_fill_limit must be >= 0");
    if (jobs < 1) throw UsageError("config: jobs must be >= 1");
    if (classifier_kinds.empty()) throw UsageError("config: classifier list must be nonempty");
    for (const auto& kind : classifier_kinds) {
        if (!classifier_kind_from_name(kind)) {
            throw UsageError("config: unknown classifier kind " + kind);
        }
    }
    if (schema.record_id < 0 || schema.date < 0 || schema.themes < 0 || schema.locations < 0 ||
        schema.tone < 0) {
        throw UsageError("config: gkg_schema indices must be >= 0");
    }
    if (synth_days < 30) throw UsageError("config: synth days must be >= 30");
    if (synth_signal < 0.0 || synth_signal > 1.0) {
        throw UsageError("config: synth signal must be in [0,1]");
    }
    if (synth_records_per_day < 1) throw UsageError("config: synth records_per_day must be >= 1");
}

std::string RunConfig::canonical_string() const {
    std::ostringstream out;
    out << "countries=";
    for (const auto& c : countries) out << c << ';';
    out << "\nseed=" << seed << "\ngkg_files=";
    for (const auto& f : gkg_files) out << f << ';';
    out << "\nmarket_csv=" << market_csv << "\ntaxonomy_rules=" << taxonomy_rules
        << "\nout_dir=" << out_dir << "\nk=" << k << "\nhorizon=" << horizon
        << "\ncomponents=" << components << "\nalpha=" << alpha << "\nfolds=" << folds
        << "\nmin_ecofin_themes=" << min_ecofin_themes
        << "\nforward_fill_limit=" << forward_fill_limit << "\ndrop_unmapped=" << drop_unmapped
        << "\nclassifiers=";
    for (const auto& kind : classifier_kinds) out << kind << ';';
    out << "\nschema=" << schema.record_id << ',' << schema.date << ',' << schema.themes << ','
        << schema.locations << ',' << schema.tone << "\nsynth=" << synth_days << ','
        << synth_signal << ',' << synth_records_per_day << ',' << synth_dir << '\n';
    return out.str();
}

std::vector<std::filesystem::path> RunConfig::resolve_gkg_files() const {
    namespace fs = std::filesystem;
    std::vector<fs::path> out;
    for (const auto& entry : gkg_files) {
        const fs::path p(entry);
        if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto& de : fs::directory_iterator(p)) {
                if (!de.is_regular_file()) continue;
                const auto ext = de.path().extension().string();
                if (ext == ".tsv" || ext == ".csv" || ext == ".gz") found.push_back(de.path());
            }
            std::sort(found.begin(), found.end());
            out.insert(out.end(), found.begin(), found.end());
        } else {
            out.push_back(p);
        }
    }
    return out;
}

} // namespace beircast
