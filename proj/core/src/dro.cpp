#include "wdrdg/dro.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wdrdg/errors.hpp"
#include "wdrdg/ot.hpp"

namespace wdrdg {

namespace {

// Column layout of the robust program, all blocks zero-based:
//   [P_1 .. P_K | gamma_1 .. gamma_K | beta_{uv} ... | t]
// with each gamma/beta block stored row-major.
struct Layout {
    Eigen::Index n_b = 0;
    int num_classes = 0;
    std::vector<std::pair<int, int>> pairs;  // 0-based (u, v), u < v

    Eigen::Index p(int k, Eigen::Index i) const { return static_cast<Eigen::Index>(k) * n_b + i; }
    Eigen::Index gamma(int k, Eigen::Index i, Eigen::Index j) const {
        return static_cast<Eigen::Index>(num_classes) * n_b +
               static_cast<Eigen::Index>(k) * n_b * n_b + i * n_b + j;
    }
    Eigen::Index beta(std::size_t pair, Eigen::Index i, Eigen::Index j) const {
        return static_cast<Eigen::Index>(num_classes) * n_b +
               static_cast<Eigen::Index>(num_classes) * n_b * n_b +
               static_cast<Eigen::Index>(pair) * n_b * n_b + i * n_b + j;
    }
    Eigen::Index t(Eigen::Index i) const {
        return static_cast<Eigen::Index>(num_classes) * n_b * (1 + n_b) +
               static_cast<Eigen::Index>(pairs.size()) * n_b * n_b + i;
    }
    Eigen::Index total() const { return t(0) + n_b; }
};

Layout make_layout(int num_classes, Eigen::Index n_b) {
    Layout layout;
    layout.n_b = n_b;
    layout.num_classes = num_classes;
    for (int u = 0; u < num_classes; ++u)
        for (int v = u + 1; v < num_classes; ++v) layout.pairs.emplace_back(u, v);
    return layout;
}

void validate_inputs(const std::vector<UncertaintySet>& sets, const ClassPriors& priors,
                     double delta) {
    if (sets.empty()) throw EmptyInput("robust program needs at least one uncertainty set");
    if (delta < 0.0) throw InvalidArgument("delta must be nonnegative");
    if (priors.num_classes() != static_cast<int>(sets.size()))
        throw DimensionMismatch("prior count does not match the number of classes");
    const Eigen::Index dim = sets.front().center.dim();
    for (const auto& s : sets) {
        if (s.center.dim() != dim)
            throw DimensionMismatch("uncertainty sets must share one feature dimension");
        if (s.radius < 0.0) throw InvalidArgument("uncertainty radius must be nonnegative");
    }
}

}  // namespace

PooledSupport PooledSupport::from_sets(const std::vector<UncertaintySet>& sets) {
    if (sets.empty()) throw EmptyInput("pooled support needs at least one set");
    Eigen::Index n_b = 0;
    for (const auto& s : sets) n_b += s.center.size();
    PooledSupport support;
    support.points.resize(n_b, sets.front().center.dim());
    support.class_of.reserve(static_cast<std::size_t>(n_b));
    support.block_offsets.push_back(0);
    Eigen::Index row = 0;
    for (const auto& s : sets) {
        support.points.middleRows(row, s.center.size()) = s.center.points();
        for (Eigen::Index i = 0; i < s.center.size(); ++i) support.class_of.push_back(s.label);
        row += s.center.size();
        support.block_offsets.push_back(row);
    }
    const DiscreteMeasure pooled = DiscreteMeasure::uniform(support.points);
    support.cost = squared_cost(pooled, pooled);
    return support;
}

LinearProgram assemble_program(const std::vector<UncertaintySet>& sets,
                               const ClassPriors& priors, double delta) {
    validate_inputs(sets, priors, delta);
    const int num_classes = static_cast<int>(sets.size());
    const PooledSupport support = PooledSupport::from_sets(sets);
    const Eigen::Index n_b = support.size();
    const Layout layout = make_layout(num_classes, n_b);
    const Eigen::MatrixXd& cost = support.cost.entries;

    const Eigen::Index num_vars = layout.total();
    const Eigen::Index eq_rows = 2 * static_cast<Eigen::Index>(num_classes) * n_b +
                                 2 * static_cast<Eigen::Index>(layout.pairs.size()) * n_b;
    const Eigen::Index le_rows = static_cast<Eigen::Index>(num_classes) +
                                 static_cast<Eigen::Index>(layout.pairs.size()) +
                                 static_cast<Eigen::Index>(num_classes) * n_b;

    LinearProgram lp;
    lp.sense = LpSense::Maximize;
    lp.objective = Eigen::VectorXd::Zero(num_vars);
    for (Eigen::Index i = 0; i < n_b; ++i) lp.objective[layout.t(i)] = -1.0;

    lp.eq_lhs = Eigen::MatrixXd::Zero(eq_rows, num_vars);
    lp.eq_rhs = Eigen::VectorXd::Zero(eq_rows);
    lp.le_lhs = Eigen::MatrixXd::Zero(le_rows, num_vars);
    lp.le_rhs = Eigen::VectorXd::Zero(le_rows);

    Eigen::Index row = 0;
    // Row marginals: gamma_k 1 = barycenter k embedded on its class block.
    for (int k = 0; k < num_classes; ++k) {
        const Eigen::Index off = support.block_offsets[static_cast<std::size_t>(k)];
        const Eigen::VectorXd& w = sets[static_cast<std::size_t>(k)].center.weights();
        for (Eigen::Index i = 0; i < n_b; ++i, ++row) {
            for (Eigen::Index j = 0; j < n_b; ++j) lp.eq_lhs(row, layout.gamma(k, i, j)) = 1.0;
            const Eigen::Index local = i - off;
            lp.eq_rhs[row] =
                (local >= 0 && local < sets[static_cast<std::size_t>(k)].center.size()) ? w[local] : 0.0;
        }
    }
    // Column marginals: gamma_k^T 1 = P_k.
    for (int k = 0; k < num_classes; ++k) {
        for (Eigen::Index j = 0; j < n_b; ++j, ++row) {
            for (Eigen::Index i = 0; i < n_b; ++i) lp.eq_lhs(row, layout.gamma(k, i, j)) = 1.0;
            lp.eq_lhs(row, layout.p(k, j)) = -1.0;
        }
    }
    // Pair couplings: beta_{uv} 1 = P_u, beta_{uv}^T 1 = P_v.
    for (std::size_t pair = 0; pair < layout.pairs.size(); ++pair) {
        const auto [u, v] = layout.pairs[pair];
        for (Eigen::Index i = 0; i < n_b; ++i, ++row) {
            for (Eigen::Index j = 0; j < n_b; ++j) lp.eq_lhs(row, layout.beta(pair, i, j)) = 1.0;
            lp.eq_lhs(row, layout.p(u, i)) = -1.0;
        }
        for (Eigen::Index j = 0; j < n_b; ++j, ++row) {
            for (Eigen::Index i = 0; i < n_b; ++i) lp.eq_lhs(row, layout.beta(pair, i, j)) = 1.0;
            lp.eq_lhs(row, layout.p(v, j)) = -1.0;
        }
    }

    row = 0;
    // Ball membership: <gamma_k, C> <= radius_k^2.
    for (int k = 0; k < num_classes; ++k, ++row) {
        for (Eigen::Index i = 0; i < n_b; ++i)
            for (Eigen::Index j = 0; j < n_b; ++j)
                lp.le_lhs(row, layout.gamma(k, i, j)) = cost(i, j);
        const double theta = sets[static_cast<std::size_t>(k)].radius;
        lp.le_rhs[row] = theta * theta;
    }
    // Separation: <beta_{uv}, C> >= delta^2, stored negated.
    for (std::size_t pair = 0; pair < layout.pairs.size(); ++pair, ++row) {
        for (Eigen::Index i = 0; i < n_b; ++i)
            for (Eigen::Index j = 0; j < n_b; ++j)
                lp.le_lhs(row, layout.beta(pair, i, j)) = -cost(i, j);
        lp.le_rhs[row] = -delta * delta;
    }
    // Epigraph: prior_k P_k(x_i) <= t_i.
    for (Eigen::Index i = 0; i < n_b; ++i) {
        for (int k = 0; k < num_classes; ++k, ++row) {
            lp.le_lhs(row, layout.p(k, i)) = priors.prior()[k];
            lp.le_lhs(row, layout.t(i)) = -1.0;
        }
    }

    return lp;
}

DroSolution solve_dro(const std::vector<UncertaintySet>& sets, const ClassPriors& priors,
                      double delta) {
    validate_inputs(sets, priors, delta);
    const LinearProgram lp = assemble_program(sets, priors, delta);
    const LpSolution sol = solve_lp(lp);
    if (sol.status == LpStatus::Infeasible) throw InfeasibleDelta(delta);
    if (sol.status == LpStatus::Unbounded)
        throw NumericalFailure("robust program reported unbounded");

    const int num_classes = static_cast<int>(sets.size());
    DroSolution out;
    out.support = PooledSupport::from_sets(sets);
    const Eigen::Index n_b = out.support.size();
    const Layout layout = make_layout(num_classes, n_b);

    out.lfds.resize(num_classes, n_b);
    for (int k = 0; k < num_classes; ++k)
        for (Eigen::Index i = 0; i < n_b; ++i)
            out.lfds(k, i) = std::max(0.0, sol.x[layout.p(k, i)]);

    out.gammas.reserve(static_cast<std::size_t>(num_classes));
    for (int k = 0; k < num_classes; ++k) {
        Eigen::MatrixXd g(n_b, n_b);
        for (Eigen::Index i = 0; i < n_b; ++i)
            for (Eigen::Index j = 0; j < n_b; ++j) g(i, j) = std::max(0.0, sol.x[layout.gamma(k, i, j)]);
        out.gammas.push_back(std::move(g));
    }
    for (std::size_t pair = 0; pair < layout.pairs.size(); ++pair) {
        Eigen::MatrixXd b(n_b, n_b);
        for (Eigen::Index i = 0; i < n_b; ++i)
            for (Eigen::Index j = 0; j < n_b; ++j) b(i, j) = std::max(0.0, sol.x[layout.beta(pair, i, j)]);
        out.betas.push_back(std::move(b));
        out.beta_pairs.emplace_back(layout.pairs[pair].first + 1, layout.pairs[pair].second + 1);
    }

    out.objective = 1.0 + sol.objective;
    out.priors = priors.prior();
    out.delta = delta;
    out.radii.resize(num_classes);
    for (int k = 0; k < num_classes; ++k) out.radii[k] = sets[static_cast<std::size_t>(k)].radius;

    out.phi.resize(n_b, num_classes);
    for (Eigen::Index i = 0; i < n_b; ++i) {
        const double total = out.lfds.col(i).sum();
        if (total <= 1e-12) {
            out.phi.row(i).setConstant(1.0 / num_classes);
            out.degenerate_rows.push_back(i);
        } else {
            out.phi.row(i) = out.lfds.col(i).transpose() / total;
        }
    }
    return out;
}

std::vector<DiscriminabilityRecord> lfd_discriminability_check(const DroSolution& solution) {
    std::vector<DiscriminabilityRecord> records;
    const int num_classes = solution.num_classes();

    auto lfd_measure = [&](int k) {
        Eigen::VectorXd w = solution.lfds.row(k).transpose().cwiseMax(0.0);
        const double total = w.sum();
        if (total < 0.5)
            throw NumericalFailure("LFD mass vanished; cannot build a measure from it");
        w /= total;
        return DiscreteMeasure(solution.support.points, std::move(w));
    };

    for (int u = 0; u < num_classes; ++u) {
        for (int v = u + 1; v < num_classes; ++v) {
            DiscriminabilityRecord rec;
            rec.class_u = u + 1;
            rec.class_v = v + 1;
            rec.delta = solution.delta;
            rec.w2 = wasserstein2(lfd_measure(u), lfd_measure(v));
            rec.satisfied = rec.w2 >= solution.delta - 1e-9;
            records.push_back(rec);
        }
    }
    return records;
}

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& rows) {
    if (!rows.is_array() || rows.empty()) throw InvalidArgument("model JSON: expected a matrix");
    const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index c = static_cast<Eigen::Index>(rows[0].size());
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != c)
            throw InvalidArgument("model JSON: ragged matrix");
        for (Eigen::Index j = 0; j < c; ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].get<double>();
    }
    return m;
}

}  // namespace

void save_model_json(const DroSolution& solution, const std::string& path) {
    nlohmann::json j;
    j["format"] = "wdrdg-model";
    j["version"] = 1;
    j["dim"] = solution.support.points.cols();
    j["num_classes"] = solution.num_classes();
    j["points"] = matrix_to_json(solution.support.points);
    j["class_of"] = solution.support.class_of;
    j["lfds"] = matrix_to_json(solution.lfds);
    j["phi"] = matrix_to_json(solution.phi);
    j["objective"] = solution.objective;
    j["delta"] = solution.delta;
    j["radii"] = std::vector<double>(solution.radii.data(), solution.radii.data() + solution.radii.size());
    j["priors"] = std::vector<double>(solution.priors.data(), solution.priors.data() + solution.priors.size());
    j["degenerate_rows"] = solution.degenerate_rows;
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
}

DroSolution load_model_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open model file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path, 0, std::string("invalid JSON: ") + e.what());
    }
    if (!j.contains("format") || j["format"] != "wdrdg-model")
        throw ParseError(path, 0, "not a wdrdg model file");

    DroSolution out;
    out.support.points = matrix_from_json(j.at("points"));
    out.support.class_of = j.at("class_of").get<std::vector<int>>();
    if (static_cast<Eigen::Index>(out.support.class_of.size()) != out.support.points.rows())
        throw ParseError(path, 0, "class_of length does not match the support");

    const int num_classes = j.at("num_classes").get<int>();
    out.support.block_offsets.push_back(0);
    for (int k = 1; k <= num_classes; ++k) {
        Eigen::Index end = out.support.block_offsets.back();
        while (end < out.support.points.rows() &&
               out.support.class_of[static_cast<std::size_t>(end)] == k)
            ++end;
        out.support.block_offsets.push_back(end);
    }
    if (out.support.block_offsets.back() != out.support.points.rows())
        throw ParseError(path, 0, "support points are not in class-blocked order");

    const DiscreteMeasure pooled = DiscreteMeasure::uniform(out.support.points);
    out.support.cost = squared_cost(pooled, pooled);

    out.lfds = matrix_from_json(j.at("lfds"));
    out.phi = matrix_from_json(j.at("phi"));
    if (out.lfds.rows() != num_classes || out.lfds.cols() != out.support.points.rows())
        throw ParseError(path, 0, "lfds shape does not match the support");
    if (out.phi.rows() != out.support.points.rows() || out.phi.cols() != num_classes)
        throw ParseError(path, 0, "phi shape does not match the support");

    out.objective = j.at("objective").get<double>();
    out.delta = j.at("delta").get<double>();
    const auto radii = j.at("radii").get<std::vector<double>>();
    const auto priors = j.at("priors").get<std::vector<double>>();
    if (static_cast<int>(radii.size()) != num_classes || static_cast<int>(priors.size()) != num_classes)
        throw ParseError(path, 0, "radii/priors length does not match num_classes");
    out.radii = Eigen::Map<const Eigen::VectorXd>(radii.data(), static_cast<Eigen::Index>(radii.size()));
    out.priors = Eigen::Map<const Eigen::VectorXd>(priors.data(), static_cast<Eigen::Index>(priors.size()));
    if (j.contains("degenerate_rows"))
        out.degenerate_rows = j.at("degenerate_rows").get<std::vector<Eigen::Index>>();
    return out;
}

}  // namespace wdrdg
