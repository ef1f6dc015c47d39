#include "steklov/graphs.hpp"

#include "steklov/mesh_io.hpp"
#include "steklov/random.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>

namespace steklov
{
void MetricGraph::validate() const
{
    if (n_vertices < 1)
        throw ValidationError("graph needs at least one vertex");
    if (lengths.size() != edges.size())
        throw ValidationError("one length per edge is required");
    std::set< std::pair< int, int > > seen;
    std::vector< std::vector< int > > adj(n_vertices);
    for (std::size_t i = 0; i < edges.size(); ++i)
    {
        auto [a, b] = edges[i];
        if (a < 0 || b < 0 || a >= n_vertices || b >= n_vertices)
            throw ValidationError(fmt::format("edge {} references a missing vertex", i));
        if (a == b)
            throw ValidationError(fmt::format("edge {} is a loop", i));
        if (!seen.insert({std::min(a, b), std::max(a, b)}).second)
            throw ValidationError(fmt::format("edge {} duplicates ({}, {})", i, a, b));
        if (!(lengths[i] > 0.0) || !std::isfinite(lengths[i]))
            throw ValidationError(fmt::format("edge {} has non-positive length {}", i, lengths[i]));
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector< bool > reached(n_vertices, false);
    std::vector< int >  stack{0};
    reached[0] = true;
    int count  = 1;
    while (!stack.empty())
    {
        const int v = stack.back();
        stack.pop_back();
        for (int u : adj[v])
            if (!reached[u])
            {
                reached[u] = true;
                ++count;
                stack.push_back(u);
            }
    }
    if (count != n_vertices)
        throw ValidationError(
            fmt::format("graph is disconnected ({} of {} vertices reachable): eigenvalue 0 would be multiple", count,
                        n_vertices));
}

MetricGraph complete_graph(int n_vertices, double length)
{
    MetricGraph g{n_vertices, {}, {}};
    for (int a = 0; a < n_vertices; ++a)
        for (int b = a + 1; b < n_vertices; ++b)
        {
            g.edges.push_back({a, b});
            g.lengths.push_back(length);
        }
    g.validate();
    return g;
}

MetricGraph path_graph(const std::vector< double >& lengths)
{
    MetricGraph g{static_cast< int >(lengths.size()) + 1, {}, lengths};
    for (int i = 0; i < static_cast< int >(lengths.size()); ++i)
        g.edges.push_back({i, i + 1});
    g.validate();
    return g;
}

MetricGraph cycle_graph(const std::vector< double >& lengths)
{
    const int n = static_cast< int >(lengths.size());
    if (n < 3)
        throw ParameterError("a cycle needs at least three edges");
    MetricGraph g{n, {}, lengths};
    for (int i = 0; i < n; ++i)
        g.edges.push_back({i, (i + 1) % n});
    g.validate();
    return g;
}

MetricGraph star_graph(const std::vector< double >& lengths)
{
    MetricGraph g{static_cast< int >(lengths.size()) + 1, {}, lengths};
    for (int i = 0; i < static_cast< int >(lengths.size()); ++i)
        g.edges.push_back({0, i + 1});
    g.validate();
    return g;
}

namespace
{
Eigen::MatrixXd laplacian_from_weights(int n, const std::vector< std::array< int, 2 > >& edges,
                                       const Eigen::VectorXd& w)
{
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < edges.size(); ++i)
    {
        const auto [a, b] = edges[i];
        const double wi   = w(static_cast< Eigen::Index >(i));
        L(a, a) += wi;
        L(b, b) += wi;
        L(a, b) -= wi;
        L(b, a) -= wi;
    }
    return L;
}

GraphSpectrum eigensystem(const Eigen::MatrixXd& L)
{
    Eigen::SelfAdjointEigenSolver< Eigen::MatrixXd > es(L);
    GraphSpectrum                                    out;
    out.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    out.vectors = es.eigenvectors();
    return out;
}

/// Least-squares fit of the nonzero Laplacian spectrum over log-weights s (w = exp s).
///
/// Residuals use the spectral-projector form on each group of equal targets C:
/// the |C| x |C| matrix V_C^T L V_C - diag(a_C), diagonal and (scaled by sqrt 2) upper entries.
/// Its derivative stays informative when eigenvalues inside C coalesce, where the per-eigenvalue
/// derivatives do not.
class SpectrumFit
{
public:
    SpectrumFit(int n, std::vector< std::array< int, 2 > > edges, std::vector< double > targets)
        : m_n(n), m_edges(std::move(edges)), m_targets(std::move(targets))
    {
        m_scale = *std::max_element(m_targets.begin(), m_targets.end());
        std::size_t k = 0;
        while (k < m_targets.size())
        {
            std::vector< int > group{static_cast< int >(k) + 1};
            while (k + 1 < m_targets.size() && m_targets[k + 1] - m_targets[k] <= 1e-9 * m_targets[k + 1])
            {
                ++k;
                group.push_back(static_cast< int >(k) + 1);
            }
            m_groups.push_back(group);
            ++k;
        }
        for (const auto& g : m_groups)
            m_rows += static_cast< int >(g.size() * (g.size() + 1) / 2);
    }

    struct Eval
    {
        Eigen::VectorXd r;
        Eigen::MatrixXd J;
        double          cost    = 0.0;
        double          max_rel = 0.0;
    };

    [[nodiscard]] Eval evaluate(const Eigen::VectorXd& s, bool jacobian) const
    {
        const Eigen::VectorXd w    = s.array().exp();
        const auto            spec = eigensystem(laplacian_from_weights(m_n, m_edges, w));
        const auto&           V    = spec.vectors;
        const auto            m    = static_cast< Eigen::Index >(m_edges.size());
        Eval                  e;
        e.r = Eigen::VectorXd::Zero(m_rows);
        if (jacobian)
            e.J = Eigen::MatrixXd::Zero(m_rows, m);
        Eigen::Index row = 0;
        for (const auto& g : m_groups)
            for (std::size_t pi = 0; pi < g.size(); ++pi)
                for (std::size_t qi = pi; qi < g.size(); ++qi, ++row)
                {
                    const int    p = g[pi], q = g[qi];
                    const double c = p == q ? 1.0 : std::sqrt(2.0);
                    if (p == q)
                    {
                        const double lam = spec.eigenvalues[p], a = m_targets[p - 1];
                        e.r(row)         = (lam - a) / m_scale;
                        e.max_rel        = std::max(e.max_rel, std::abs(lam - a) / a);
                    }
                    if (!jacobian)
                        continue;
                    for (Eigen::Index i = 0; i < m; ++i)
                    {
                        const auto [x, y] = m_edges[i];
                        e.J(row, i)       = c * w(i) * (V(x, p) - V(y, p)) * (V(x, q) - V(y, q)) / m_scale;
                    }
                }
        e.cost = 0.5 * e.r.squaredNorm();
        return e;
    }

    struct Outcome
    {
        Eigen::VectorXd s;
        double          max_rel    = 0.0;
        int             iterations = 0;
    };

    /// Levenberg-Marquardt with an Armijo acceptance test; optional box on s.
    [[nodiscard]] Outcome solve(Eigen::VectorXd s, int max_iters, double tol, const Eigen::VectorXd* lo = nullptr,
                                const Eigen::VectorXd* hi = nullptr) const
    {
        const auto clamp = [&](Eigen::VectorXd v) {
            if (lo)
                v = v.cwiseMax(*lo);
            if (hi)
                v = v.cwiseMin(*hi);
            return v;
        };
        s           = clamp(std::move(s));
        Eval   cur  = evaluate(s, true);
        double mu   = 1e-3;
        int    iter = 0;
        for (; iter < max_iters && cur.max_rel > 1e-3 * tol; ++iter)
        {
            const Eigen::MatrixXd A      = cur.J.transpose() * cur.J;
            const Eigen::VectorXd g      = cur.J.transpose() * cur.r;
            const double          floor_ = 1e-12 * std::max(A.diagonal().maxCoeff(), 1e-300);
            bool                  moved  = false;
            for (int attempt = 0; attempt < 40; ++attempt)
            {
                Eigen::MatrixXd M = A;
                M.diagonal().array() += mu * (A.diagonal().array() + floor_);
                Eigen::VectorXd step = M.ldlt().solve(-g);
                const double    big  = step.cwiseAbs().maxCoeff();
                if (!std::isfinite(big))
                {
                    mu *= 10.0;
                    continue;
                }
                if (big > 2.0)
                    step *= 2.0 / big;
                const Eigen::VectorXd trial = clamp(s + step);
                const Eigen::VectorXd delta = trial - s;
                const Eval            next  = evaluate(trial, false);
                if (next.cost <= cur.cost + 1e-4 * g.dot(delta) && next.cost < cur.cost)
                {
                    s     = trial;
                    cur   = evaluate(s, true);
                    mu    = std::max(mu / 3.0, 1e-12);
                    moved = true;
                    break;
                }
                mu *= 4.0;
            }
            if (!moved)
                break;
        }
        return {s, cur.max_rel, iter};
    }

private:
    int                                 m_n;
    std::vector< std::array< int, 2 > > m_edges;
    std::vector< double >               m_targets;
    std::vector< std::vector< int > >   m_groups;   // eigenvalue indices (1-based) sharing a target
    int                                 m_rows  = 0;
    double                              m_scale = 1.0;
};

MetricGraph graph_from_log_weights(int n, const std::vector< std::array< int, 2 > >& edges, const Eigen::VectorXd& s)
{
    MetricGraph g{n, edges, {}};
    for (Eigen::Index i = 0; i < s.size(); ++i)
        g.lengths.push_back(std::exp(-s(i)));
    return g;
}
} // namespace

Eigen::MatrixXd graph_laplacian(const MetricGraph& g)
{
    g.validate();
    Eigen::VectorXd w(g.num_edges());
    for (int i = 0; i < g.num_edges(); ++i)
        w(i) = 1.0 / g.lengths[i];
    return laplacian_from_weights(g.n_vertices, g.edges, w);
}

GraphSpectrum graph_laplacian_spectrum(const MetricGraph& g)
{
    auto out = eigensystem(graph_laplacian(g));
    // fix the sign of the kernel vector; Eigen leaves it arbitrary
    if (out.vectors.col(0).sum() < 0.0)
        out.vectors.col(0) *= -1.0;
    out.eigenvalues[0] = std::max(out.eigenvalues[0], 0.0);
    return out;
}

Eigen::MatrixXd eigenvalue_weight_derivatives(const MetricGraph& g)
{
    const auto      spec = graph_laplacian_spectrum(g);
    Eigen::MatrixXd D(g.n_vertices, g.num_edges());
    for (int k = 0; k < g.n_vertices; ++k)
        for (int i = 0; i < g.num_edges(); ++i)
        {
            const auto [x, y] = g.edges[i];
            const double d    = spec.vectors(x, k) - spec.vectors(y, k);
            D(k, i)           = d * d;
        }
    return D;
}

double spectrum_error(const MetricGraph& g, std::span< const double > targets)
{
    const auto spec = graph_laplacian_spectrum(g);
    if (targets.size() + 1 != spec.eigenvalues.size())
        throw ParameterError("target count must be the vertex count minus one");
    double err = 0.0;
    for (std::size_t k = 0; k < targets.size(); ++k)
        err = std::max(err, std::abs(spec.eigenvalues[k + 1] - targets[k]) / targets[k]);
    return err;
}

PrescriptionResult prescribe_spectrum(std::span< const double > targets, const PrescriptionOptions& options)
{
    if (targets.empty())
        throw ParameterError("at least one target eigenvalue is required");
    for (std::size_t k = 0; k < targets.size(); ++k)
    {
        if (!(targets[k] > 0.0) || !std::isfinite(targets[k]))
            throw ParameterError(fmt::format("target {} = {} is not positive", k + 1, targets[k]));
        if (k > 0 && targets[k] < targets[k - 1])
            throw ParameterError("targets must be sorted ascending");
    }
    if (!(options.tol > 0.0) || options.max_iters < 1 || options.starts < 1)
        throw ParameterError("prescription needs tol > 0, max_iters >= 1 and starts >= 1");

    const int N = static_cast< int >(targets.size());
    if (N == 1)
    {
        MetricGraph g{2, {{0, 1}}, {2.0 / targets[0]}};
        return {g, spectrum_error(g, targets), 0, 0};
    }

    const MetricGraph                shape = complete_graph(N + 1, 1.0);
    const std::vector< double >      tv(targets.begin(), targets.end());
    const SpectrumFit                fit(N + 1, shape.edges, tv);
    const double                     mean = std::accumulate(tv.begin(), tv.end(), 0.0) / N;
    const double                     s0   = std::log(mean / (N + 1));   // K_{N+1} with weight w has spectrum (N+1) w
    Rng                              rng(options.seed);
    PrescriptionResult               best;
    best.max_rel_err = std::numeric_limits< double >::infinity();
    for (int start = 0; start < options.starts; ++start)
    {
        Eigen::VectorXd s(shape.num_edges());
        // later starts sample log-weights more widely, reaching strongly non-uniform solutions
        const double spread = start < options.starts / 2 ? 1.5 : 4.0;
        for (Eigen::Index i = 0; i < s.size(); ++i)
            s(i) = s0 + (start == 0 ? 0.0 : uniform(rng, -spread, spread));
        const auto  outcome = fit.solve(s, options.max_iters, options.tol);
        MetricGraph g       = graph_from_log_weights(N + 1, shape.edges, outcome.s);
        // the contract is checked on the returned lengths, not the optimizer's own bookkeeping
        const double err = spectrum_error(g, targets);
        if (err < best.max_rel_err)
            best = {g, err, start, outcome.iterations};
        if (err <= options.tol)
            return best;
    }
    throw OptimizationFailure(fmt::format("no start reached relative error {} (best {:.3e} after {} starts)",
                                          options.tol, best.max_rel_err, options.starts),
                              best.graph, best.max_rel_err);
}

StabilityReport stability_probe(const MetricGraph& g, int k, int n_perturbations, double magnitude, std::uint64_t seed,
                                double tol)
{
    g.validate();
    if (k < 0 || k >= g.n_vertices)
        throw ParameterError(fmt::format("eigenvalue index {} outside [0, {}]", k, g.n_vertices - 1));
    if (!(magnitude >= 0.0) || magnitude >= 1.0)
        throw ParameterError("perturbation magnitude must lie in [0, 1)");

    const auto            spec = graph_laplacian_spectrum(g);
    std::vector< double > targets(spec.eigenvalues.begin() + 1, spec.eigenvalues.end());
    StabilityReport       out;
    out.cluster_first = out.cluster_last = k;
    const auto close = [&](int i, int j) {
        return std::abs(spec.eigenvalues[i] - spec.eigenvalues[j]) <= 1e-8 * std::max(1.0, spec.eigenvalues[j]);
    };
    while (out.cluster_first > 0 && close(out.cluster_first - 1, out.cluster_first))
        --out.cluster_first;
    while (out.cluster_last + 1 < g.n_vertices && close(out.cluster_last + 1, out.cluster_last))
        ++out.cluster_last;

    const auto      m = static_cast< Eigen::Index >(g.num_edges());
    Eigen::VectorXd s0(m), lo(m), hi(m);
    for (Eigen::Index i = 0; i < m; ++i)
    {
        s0(i) = -std::log(g.lengths[i]);
        lo(i) = s0(i) - std::log1p(magnitude);
        hi(i) = s0(i) - std::log1p(-magnitude);
    }
    const bool        has_targets = !targets.empty() && targets.front() > 0.0;
    const SpectrumFit fit(g.n_vertices, g.edges, has_targets ? targets : std::vector< double >{1.0});

    Rng rng(seed);
    int restored = 0;
    for (int t = 0; t < n_perturbations; ++t)
    {
        MetricGraph p = g;
        for (auto& l : p.lengths)
            l *= 1.0 + magnitude * uniform(rng, -1.0, 1.0);
        const auto ps = graph_laplacian_spectrum(p);
        double     lo_v = ps.eigenvalues[out.cluster_first], hi_v = lo_v;
        for (int i = out.cluster_first; i <= out.cluster_last; ++i)
        {
            lo_v = std::min(lo_v, ps.eigenvalues[i]);
            hi_v = std::max(hi_v, ps.eigenvalues[i]);
        }
        out.spreads.push_back(hi_v - lo_v);

        double err = 0.0;
        if (has_targets && magnitude > 0.0)
        {
            Eigen::VectorXd sp(m);
            for (Eigen::Index i = 0; i < m; ++i)
                sp(i) = -std::log(p.lengths[i]);
            const auto outcome = fit.solve(sp, 200, tol, &lo, &hi);
            err                = spectrum_error(graph_from_log_weights(g.n_vertices, g.edges, outcome.s), targets);
        }
        else if (has_targets)
            err = spectrum_error(p, targets);
        out.restored_errors.push_back(err);
        if (err <= tol)
            ++restored;
    }
    out.max_spread        = out.spreads.empty() ? 0.0 : *std::max_element(out.spreads.begin(), out.spreads.end());
    out.restored_fraction = n_perturbations > 0 ? static_cast< double >(restored) / n_perturbations : 1.0;
    return out;
}

void write_graph(std::ostream& os, const MetricGraph& g)
{
    os << "steklov-graph v1\n";
    os << "vertices " << g.n_vertices << '\n';
    os << "edges " << g.edges.size() << '\n';
    for (std::size_t i = 0; i < g.edges.size(); ++i)
        os << g.edges[i][0] << ' ' << g.edges[i][1] << ' ' << format_real(g.lengths[i]) << '\n';
}

MetricGraph read_graph(std::istream& is)
{
    std::string header;
    std::getline(is, header);
    if (!header.empty() && header.back() == '\r')
        header.pop_back();
    if (header != "steklov-graph v1")
        throw IoError(fmt::format("not a steklov-graph v1 file (header '{}')", header));
    std::string word;
    MetricGraph g;
    std::size_t n_edges = 0;
    if (!(is >> word >> g.n_vertices) || word != "vertices")
        throw IoError("steklov-graph: expected 'vertices <N>'");
    if (!(is >> word >> n_edges) || word != "edges")
        throw IoError("steklov-graph: expected 'edges <E>'");
    for (std::size_t i = 0; i < n_edges; ++i)
    {
        int         a = 0, b = 0;
        std::string token;
        if (!(is >> a >> b >> token))
            throw IoError(fmt::format("steklov-graph: truncated edge list at edge {}", i));
        char*        end = nullptr;
        const double l   = std::strtod(token.c_str(), &end);
        if (end != token.c_str() + token.size())
            throw IoError(fmt::format("steklov-graph: '{}' is not a length", token));
        g.edges.push_back({a, b});
        g.lengths.push_back(l);
    }
    g.validate();
    return g;
}

void save_graph(const std::filesystem::path& path, const MetricGraph& g)
{
    std::ofstream os(path);
    if (!os)
        throw IoError(fmt::format("cannot write {}", path.string()));
    write_graph(os, g);
}

MetricGraph load_graph(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is)
        throw IoError(fmt::format("cannot read {}", path.string()));
    return read_graph(is);
}

} // namespace steklov
