#pragma once

#include "beircast/date.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace beircast {

enum class NodeRole { beir, market, commodity, narrative };
std::string_view node_role_name(NodeRole r);

/// Aligned panel of the graph variables: per-country BEIR/stock/FX/steepener
/// differences, the three commodities, and the five narrative components per
/// country (74 variables in the paper configuration).
struct VariablePanel {
    std::vector<std::string> names;
    std::vector<NodeRole> roles;
    std::vector<std::string> countries; // empty for commodities
    std::vector<Date> dates;
    Eigen::MatrixXd values;

    int size() const { return int(names.size()); }
};

// Bivariate lag-1 Granger tests for every ordered pair (x -> y), x != y:
// restricted y_t ~ 1 + y_{t-1} versus full y_t ~ 1 + y_{t-1} + x_{t-1},
// p-values from the nested F-test with q=1. The diagonal is NaN; collinear
// pairs degrade to p = 1. `jobs` parallelizes over source variables.
Eigen::MatrixXd pairwise_granger(const VariablePanel& panel, int lag = 1, int jobs = 1);

struct GrangerEdge {
    int source = 0;
    int target = 0;
    double p_raw = 1.0;
    double p_adjusted = 1.0;
};

struct GrangerGraph {
    std::vector<std::string> names;
    std::vector<NodeRole> roles;
    std::vector<std::string> countries;
    std::vector<GrangerEdge> edges;
    std::vector<double> betweenness_scores;
    std::vector<int> quintiles;
    double alpha = 0.05;

    double density() const;
    std::vector<std::vector<int>> adjacency() const; // successor lists
};

double graph_density(int nodes, int edges);

// BH-adjusts all n(n-1) off-diagonal p-values jointly and keeps edges with
// adjusted p <= alpha. Every variable stays a node. Betweenness and quintile
// ranks are filled in.
GrangerGraph build_graph(const VariablePanel& panel, const Eigen::MatrixXd& p_matrix,
                         double alpha = 0.05);

// Exact directed unweighted shortest-path betweenness (Brandes), raw scores;
// the (n-1)(n-2) normalization constant is recorded in exported metadata.
std::vector<double> betweenness(int n_nodes, const std::vector<GrangerEdge>& edges);

// Quintiles by descending score, ties broken by node name; quintile 1 = top.
std::vector<int> quintile_rank(const std::vector<double>& scores,
                               const std::vector<std::string>& names);

struct BeirPredecessors {
    std::string country;
    std::vector<std::string> market_sources;            // market/commodity variables
    std::vector<std::string> local_narrative_sources;
    std::vector<std::string> foreign_narrative_sources;
    bool has_foreign_narrative_inflow() const { return !foreign_narrative_sources.empty(); }
};

// Classifies every incoming edge of each country's BEIR node by source role
// and source country.
std::vector<BeirPredecessors> beir_predecessors(const GrangerGraph& graph);

void write_graphml(const std::filesystem::path& path, const GrangerGraph& graph);
void write_dot(const std::filesystem::path& path, const GrangerGraph& graph);
void write_predecessors_json(const std::filesystem::path& path,
                             const std::vector<BeirPredecessors>& reports);
void write_predecessors_csv(const std::filesystem::path& path,
                            const std::vector<BeirPredecessors>& reports);

} // namespace beircast
