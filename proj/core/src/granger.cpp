#include "beircast/granger.hpp"

#include "beircast/csv.hpp"
#include "beircast/error.hpp"
#include "beircast/io.hpp"
#include "beircast/parallel.hpp"
#include "beircast/stats.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>

namespace beircast {

using json = nlohmann::json;

std::string_view node_role_name(NodeRole r) {
    switch (r) {
        case NodeRole::beir: return "beir";
        case NodeRole::market: return "market";
        case NodeRole::commodity: return "commodity";
        case NodeRole::narrative: return "narrative";
    }
    return "unknown";
}

Eigen::MatrixXd pairwise_granger(const VariablePanel& panel, int lag, int jobs) {
    if (lag != 1) throw NumericalError("pairwise_granger: only lag 1 is supported");
    const int n_obs = int(panel.values.rows());
    const int n_vars = panel.size();
    if (n_obs < 30 + lag) throw NumericalError("pairwise_granger: need at least 30 + lag rows");

    Eigen::MatrixXd p_matrix =
        Eigen::MatrixXd::Constant(n_vars, n_vars, std::numeric_limits<double>::quiet_NaN());

    const int t = n_obs - lag; // usable observations per regression
    parallel_for(std::size_t(n_vars), jobs, [&](std::size_t target) {
        const int y_idx = int(target);
        Eigen::VectorXd y_now(t), y_lag(t);
        for (int i = 0; i < t; ++i) {
            y_now(i) = panel.values(i + lag, y_idx);
            y_lag(i) = panel.values(i, y_idx);
        }
        Eigen::MatrixXd restricted(t, 2);
        restricted.col(0).setOnes();
        restricted.col(1) = y_lag;
        stats::OlsFit restricted_fit;
        bool restricted_ok = true;
        try {
            restricted_fit = stats::ols_fit(restricted, y_now);
        } catch (const NumericalError&) {
            restricted_ok = false; // constant target: every test degenerates
        }

        Eigen::MatrixXd full(t, 3);
        full.leftCols(2) = restricted;
        for (int source = 0; source < n_vars; ++source) {
            if (source == y_idx) continue;
            if (!restricted_ok) {
                p_matrix(source, y_idx) = 1.0;
                continue;
            }
            for (int i = 0; i < t; ++i) full(i, 2) = panel.values(i, source);
            try {
                const stats::OlsFit full_fit = stats::ols_fit(full, y_now);
                p_matrix(source, y_idx) =
                    stats::f_test_nested(restricted_fit, full_fit, 1).p_value;
            } catch (const NumericalError&) {
                // x lag collinear with y lag (or constant): degenerate pair.
                p_matrix(source, y_idx) = 1.0;
            }
        }
    });
    return p_matrix;
}

double graph_density(int nodes, int edges) {
    return double(edges) / (double(nodes) * double(nodes - 1));
}

double GrangerGraph::density() const {
    return graph_density(int(names.size()), int(edges.size()));
}

std::vector<std::vector<int>> GrangerGraph::adjacency() const {
    std::vector<std::vector<int>> adj(names.size());
    for (const auto& e : edges) adj[std::size_t(e.source)].push_back(e.target);
    return adj;
}

GrangerGraph build_graph(const VariablePanel& panel, const Eigen::MatrixXd& p_matrix,
                         double alpha) {
    const int n = panel.size();
    if (p_matrix.rows() != n || p_matrix.cols() != n) {
        throw NumericalError("build_graph: p-matrix does not match panel");
    }
    // Joint BH over all ordered pairs.
    std::vector<double> p_flat;
    std::vector<std::pair<int, int>> pair_index;
    p_flat.reserve(std::size_t(n) * std::size_t(n - 1));
    for (int source = 0; source < n; ++source) {
        for (int target = 0; target < n; ++target) {
            if (source == target) continue;
            const double p = p_matrix(source, target);
            if (std::isnan(p)) throw NumericalError("build_graph: incomplete p-matrix");
            p_flat.push_back(p);
            pair_index.emplace_back(source, target);
        }
    }
    const stats::BhResult bh = stats::bh_adjust(p_flat, alpha);

    GrangerGraph graph;
    graph.names = panel.names;
    graph.roles = panel.roles;
    graph.countries = panel.countries;
    graph.alpha = alpha;
    for (std::size_t i = 0; i < p_flat.size(); ++i) {
        if (bh.reject[i]) {
            GrangerEdge e;
            e.source = pair_index[i].first;
            e.target = pair_index[i].second;
            e.p_raw = p_flat[i];
            e.p_adjusted = bh.adjusted[i];
            graph.edges.push_back(e);
        }
    }
    graph.betweenness_scores = betweenness(n, graph.edges);
    graph.quintiles = quintile_rank(graph.betweenness_scores, graph.names);
    return graph;
}

std::vector<double> betweenness(int n_nodes, const std::vector<GrangerEdge>& edges) {
    std::vector<std::vector<int>> adj(std::size_t(n_nodes));
    for (const auto& e : edges) adj[std::size_t(e.source)].push_back(e.target);
    std::vector<double> centrality(std::size_t(n_nodes), 0.0);

    // Brandes' accumulation, one BFS per source.
    for (int s = 0; s < n_nodes; ++s) {
        std::vector<int> order;
        std::vector<std::vector<int>> predecessors(std::size_t(n_nodes));
        std::vector<double> sigma(std::size_t(n_nodes), 0.0);
        std::vector<int> dist(std::size_t(n_nodes), -1);
        sigma[std::size_t(s)] = 1.0;
        dist[std::size_t(s)] = 0;
        std::deque<int> queue{s};
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            order.push_back(v);
            for (int w : adj[std::size_t(v)]) {
                if (dist[std::size_t(w)] < 0) {
                    dist[std::size_t(w)] = dist[std::size_t(v)] + 1;
                    queue.push_back(w);
                }
                if (dist[std::size_t(w)] == dist[std::size_t(v)] + 1) {
                    sigma[std::size_t(w)] += sigma[std::size_t(v)];
                    predecessors[std::size_t(w)].push_back(v);
                }
            }
        }
        std::vector<double> delta(std::size_t(n_nodes), 0.0);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const int w = *it;
            for (int v : predecessors[std::size_t(w)]) {
                delta[std::size_t(v)] += sigma[std::size_t(v)] / sigma[std::size_t(w)] *
                                         (1.0 + delta[std::size_t(w)]);
            }
            if (w != s) centrality[std::size_t(w)] += delta[std::size_t(w)];
        }
    }
    return centrality;
}

std::vector<int> quintile_rank(const std::vector<double>& scores,
                               const std::vector<std::string>& names) {
    const int n = int(scores.size());
    if (n < 5) throw NumericalError("quintile_rank: need at least 5 nodes");
    if (names.size() != scores.size()) throw NumericalError("quintile_rank: label mismatch");
    std::vector<int> order(std::size_t(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (scores[std::size_t(a)] != scores[std::size_t(b)]) {
            return scores[std::size_t(a)] > scores[std::size_t(b)];
        }
        return names[std::size_t(a)] < names[std::size_t(b)];
    });
    std::vector<int> quintile(std::size_t(n), 0);
    for (int rank = 0; rank < n; ++rank) {
        quintile[std::size_t(order[std::size_t(rank)])] = int(std::int64_t(rank) * 5 / n) + 1;
    }
    return quintile;
}

std::vector<BeirPredecessors> beir_predecessors(const GrangerGraph& graph) {
    std::vector<BeirPredecessors> reports;
    for (int node = 0; node < int(graph.names.size()); ++node) {
        if (graph.roles[std::size_t(node)] != NodeRole::beir) continue;
        BeirPredecessors report;
        report.country = graph.countries[std::size_t(node)];
        for (const auto& e : graph.edges) {
            if (e.target != node) continue;
            const auto& src_name = graph.names[std::size_t(e.source)];
            switch (graph.roles[std::size_t(e.source)]) {
                case NodeRole::market:
                case NodeRole::commodity:
                case NodeRole::beir:
                    report.market_sources.push_back(src_name);
                    break;
                case NodeRole::narrative:
                    if (graph.countries[std::size_t(e.source)] == report.country) {
                        report.local_narrative_sources.push_back(src_name);
                    } else {
                        report.foreign_narrative_sources.push_back(src_name);
                    }
                    break;
            }
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

} // namespace

void write_graphml(const std::filesystem::path& path, const GrangerGraph& graph) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"role\" for=\"node\" attr.name=\"role\" attr.type=\"string\"/>\n"
        << "  <key id=\"country\" for=\"node\" attr.name=\"country\" attr.type=\"string\"/>\n"
        << "  <key id=\"betweenness\" for=\"node\" attr.name=\"betweenness\" attr.type=\"double\"/>\n"
        << "  <key id=\"quintile\" for=\"node\" attr.name=\"quintile\" attr.type=\"int\"/>\n"
        << "  <key id=\"p_raw\" for=\"edge\" attr.name=\"p_raw\" attr.type=\"double\"/>\n"
        << "  <key id=\"p_adjusted\" for=\"edge\" attr.name=\"p_adjusted\" attr.type=\"double\"/>\n"
        << "  <graph edgedefault=\"directed\" parse.betweenness.normalization=\""
        << (int64_t(graph.names.size()) - 1) * (int64_t(graph.names.size()) - 2) << "\">\n";
    for (std::size_t i = 0; i < graph.names.size(); ++i) {
        out << "    <node id=\"" << xml_escape(graph.names[i]) << "\">\n"
            << "      <data key=\"role\">" << node_role_name(graph.roles[i]) << "</data>\n"
            << "      <data key=\"country\">" << xml_escape(graph.countries[i]) << "</data>\n"
            << "      <data key=\"betweenness\">" << format_double(graph.betweenness_scores[i])
            << "</data>\n"
            << "      <data key=\"quintile\">" << graph.quintiles[i] << "</data>\n"
            << "    </node>\n";
    }
    for (const auto& e : graph.edges) {
        out << "    <edge source=\"" << xml_escape(graph.names[std::size_t(e.source)])
            << "\" target=\"" << xml_escape(graph.names[std::size_t(e.target)]) << "\">\n"
            << "      <data key=\"p_raw\">" << format_double(e.p_raw) << "</data>\n"
            << "      <data key=\"p_adjusted\">" << format_double(e.p_adjusted) << "</data>\n"
            << "    </edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
    atomic_write_file(path, out.str());
}

void write_dot(const std::filesystem::path& path, const GrangerGraph& graph) {
    std::ostringstream out;
    out << "digraph granger {\n";
    for (std::size_t i = 0; i < graph.names.size(); ++i) {
        out << "  \"" << graph.names[i] << "\" [role=\"" << node_role_name(graph.roles[i])
            << "\" country=\"" << graph.countries[i] << "\" betweenness=\""
            << format_double(graph.betweenness_scores[i]) << "\" quintile=\""
            << graph.quintiles[i] << "\"];\n";
    }
    for (const auto& e : graph.edges) {
        out << "  \"" << graph.names[std::size_t(e.source)] << "\" -> \""
            << graph.names[std::size_t(e.target)] << "\" [p_raw=\"" << format_double(e.p_raw)
            << "\" p_adjusted=\"" << format_double(e.p_adjusted) << "\"];\n";
    }
    out << "}\n";
    atomic_write_file(path, out.str());
}

void write_predecessors_json(const std::filesystem::path& path,
                             const std::vector<BeirPredecessors>& reports) {
    json j = json::array();
    for (const auto& r : reports) {
        json entry;
        entry["country"] = r.country;
        entry["market_sources"] = r.market_sources;
        entry["local_narrative_sources"] = r.local_narrative_sources;
        entry["foreign_narrative_sources"] = r.foreign_narrative_sources;
        entry["has_foreign_narrative_inflow"] = r.has_foreign_narrative_inflow();
        j.push_back(std::move(entry));
    }
    atomic_write_file(path, j.dump(2) + "\n");
}

void write_predecessors_csv(const std::filesystem::path& path,
                            const std::vector<BeirPredecessors>& reports) {
    std::string body = "country,source,source_class\n";
    for (const auto& r : reports) {
        for (const auto& s : r.market_sources) {
            body += csv::join_row({r.country, s, "market"}) + "\n";
        }
        for (const auto& s : r.local_narrative_sources) {
            body += csv::join_row({r.country, s, "local-narrative"}) + "\n";
        }
        for (const auto& s : r.foreign_narrative_sources) {
            body += csv::join_row({r.country, s, "foreign-narrative"}) + "\n";
        }
    }
    atomic_write_file(path, body);
}

} // namespace beircast
