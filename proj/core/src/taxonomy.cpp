#include "beircast/taxonomy.hpp"

#include "beircast/csv.hpp"
#include "beircast/error.hpp"
#include "beircast/sha256.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <mutex>

namespace beircast {

namespace {

struct CategoryEntry {
    Category category;
    std::string_view name;
    bool descriptive;
};

constexpr std::array<CategoryEntry, kCategoryCount> kCategories = {{
    {Category::Ecofin, "Ecofin", false},
    {Category::Disease, "Disease", false},
    {Category::Actor, "Actor", true},
    {Category::Action, "Action", false},
    {Category::Language, "Language", true},
    {Category::Ethnicity, "Ethnicity", true},
    {Category::Animal, "Animal", true},
    {Category::Disaster, "Disaster", false},
    {Category::Social, "Social", false},
    {Category::Relation, "Relation", false},
    {Category::Political, "Political", false},
    {Category::Health, "Health", false},
    {Category::Weapons, "Weapons", false},
    {Category::Military, "Military", false},
    {Category::Terror, "Terror", false},
    {Category::Environment, "Environment", false},
    {Category::Food, "Food", false},
    {Category::Government, "Government", false},
    {Category::AidGroups, "Aid groups", false},
    {Category::Information, "Information", false},
    {Category::Conflict, "Conflict", false},
    {Category::Emergency, "Emergency", false},
    {Category::HumanRights, "Human rights", false},
    {Category::Migration, "Migration", false},
    {Category::Agriculture, "Agriculture", false},
    {Category::Discrimination, "Discrimination", false},
    {Category::Incident, "Incident", false},
    {Category::Criminal, "Criminal", false},
    {Category::Tech, "Tech", false},
    {Category::PointsOfInterest, "Points of interest", true},
}};

} // namespace

std::string_view category_name(Category c) {
    return kCategories[std::size_t(c)].name;
}

std::optional<Category> category_from_name(std::string_view name) {
    for (const auto& e : kCategories) {
        if (e.name == name) return e.category;
    }
    return std::nullopt;
}

bool is_descriptive(Category c) {
    return kCategories[std::size_t(c)].descriptive;
}

ThemeTaxonomy ThemeTaxonomy::load_rules(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open taxonomy rules file: " + path.string());

    std::vector<Rule> rules;
    std::string line;
    int line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = csv::split_line(line);
        if (!saw_header) {
            if (fields.size() != 2 || fields[0] != "pattern" || fields[1] != "category") {
                throw DataError(path.string() + ":" + std::to_string(line_no) +
                                ": expected header 'pattern,category'");
            }
            saw_header = true;
            continue;
        }
        if (fields.size() != 2 || fields[0].empty()) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": malformed rule line");
        }
        const auto cat = category_from_name(fields[1]);
        if (!cat) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": unknown category '" + fields[1] + "'");
        }
        rules.push_back(Rule{std::move(fields[0]), *cat});
    }
    if (!saw_header) throw DataError("taxonomy rules file is empty: " + path.string());
    if (rules.empty()) {
        throw DataError("taxonomy rules file has no rules: " + path.string());
    }
    return from_rules(std::move(rules));
}

ThemeTaxonomy ThemeTaxonomy::from_rules(std::vector<Rule> rules) {
    if (rules.empty()) throw DataError("taxonomy must have at least one rule");
    for (std::size_t i = 0; i < rules.size(); ++i) {
        for (std::size_t j = i + 1; j < rules.size(); ++j) {
            if (rules[i].pattern == rules[j].pattern) {
                throw DataError("duplicate taxonomy pattern '" + rules[i].pattern + "'");
            }
        }
    }
    ThemeTaxonomy t;
    t.rules_ = std::move(rules);
    return t;
}

std::optional<Category> ThemeTaxonomy::categorize(std::string_view theme_label) const {
    {
        std::shared_lock lock(cache_->mutex);
        auto it = cache_->map.find(std::string(theme_label));
        if (it != cache_->map.end()) {
            return it->second < 0 ? std::nullopt : std::optional(Category(it->second));
        }
    }
    std::optional<Category> result;
    for (const auto& rule : rules_) {
        if (theme_label.find(rule.pattern) != std::string_view::npos) {
            result = rule.category;
            break;
        }
    }
    {
        std::unique_lock lock(cache_->mutex);
        cache_->map.emplace(std::string(theme_label), result ? int(*result) : -1);
    }
    return result;
}

bool ThemeTaxonomy::is_retained(std::string_view theme_label) const {
    const auto cat = categorize(theme_label);
    if (!cat) return !drop_unmapped_;
    return !is_descriptive(*cat);
}

std::optional<Category> ThemeTaxonomy::reporting_category(std::string_view theme_label) const {
    const auto cat = categorize(theme_label);
    if (!cat) {
        if (drop_unmapped_) return std::nullopt;
        return Category::Action;
    }
    if (is_descriptive(*cat)) return std::nullopt;
    return cat;
}

std::string ThemeTaxonomy::fingerprint() const {
    Sha256 h;
    for (const auto& rule : rules_) {
        h.update(rule.pattern);
        h.update("\x1f");
        h.update(category_name(rule.category));
        h.update("\x1e");
    }
    h.update(drop_unmapped_ ? "drop-unmapped" : "keep-unmapped");
    return h.hex_digest();
}

} // namespace beircast
