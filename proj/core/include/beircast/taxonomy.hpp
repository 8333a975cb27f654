#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace beircast {

/// The 30 theme categories. Five are purely descriptive and are dropped from
/// modelling, leaving 25 retained categories.
enum class Category : int {
    Ecofin, Disease, Actor, Action, Language, Ethnicity, Animal, Disaster,
    Social, Relation, Political, Health, Weapons, Military, Terror,
    Environment, Food, Government, AidGroups, Information, Conflict,
    Emergency, HumanRights, Migration, Agriculture, Discrimination, Incident,
    Criminal, Tech, PointsOfInterest,
};

inline constexpr int kCategoryCount = 30;
inline constexpr int kRetainedCategoryCount = 25;

std::string_view category_name(Category c);
std::optional<Category> category_from_name(std::string_view name);
bool is_descriptive(Category c);

/// Ordered substring rules mapping GDELT theme labels to categories.
/// First matching rule wins; labels matching no rule are Unmapped.
class ThemeTaxonomy {
public:
    struct Rule {
        std::string pattern;
        Category category;
    };

    // Loads a CSV rule table with header `pattern,category`. Duplicate
    // patterns, unknown category names, malformed lines and empty tables are
    // fatal (DataError with line number).
    static ThemeTaxonomy load_rules(const std::filesystem::path& path);
    static ThemeTaxonomy from_rules(std::vector<Rule> rules);

    // First rule whose pattern is a substring of the label; nullopt = Unmapped.
    std::optional<Category> categorize(std::string_view theme_label) const;

    // Unmapped labels are retained (reported under Action) unless
    // drop_unmapped is set. Descriptive categories are never retained.
    bool is_retained(std::string_view theme_label) const;

    // Category used for reporting: mapped category, or Action for unmapped
    // retained labels. nullopt when the label is dropped.
    std::optional<Category> reporting_category(std::string_view theme_label) const;

    void set_drop_unmapped(bool drop) { drop_unmapped_ = drop; }
    bool drop_unmapped() const { return drop_unmapped_; }

    const std::vector<Rule>& rules() const { return rules_; }

    // Hash over the rule table and the drop policy; recorded in sidecars so
    // downstream stages can detect taxonomy changes.
    std::string fingerprint() const;

private:
    std::vector<Rule> rules_;
    bool drop_unmapped_ = false;

    // Memoized label -> category lookups (-1 encodes Unmapped), guarded for
    // concurrent readers during parallel panel construction.
    struct Cache {
        mutable std::shared_mutex mutex;
        std::unordered_map<std::string, int> map;
    };
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

} // namespace beircast
