#include "mgsg/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>

#include "json.hpp"
#include "mgsg/error.hpp"
#include "mgsg/resolvent.hpp"
#include "mgsg/semigroup.hpp"
#include "mgsg/spec_io.hpp"
#include "mgsg/walks.hpp"

namespace mgsg {

namespace {

using nlohmann::ordered_json;

const double pi = 3.14159265358979323846;

struct Context {
    Context(const CliOptions& o, Problem p) : opts(o), problem(std::move(p)) {}

    const CliOptions& opts;
    Problem problem;
    double tol_scale = 1.0;
    ordered_json result = ordered_json::object();
    ordered_json checks = ordered_json::array();
    ordered_json warnings = ordered_json::array();
    std::string csv;  // set by commands that support --format csv
    bool failed = false;

    const MetricGraph& g() const { return problem.graph; }
    const BoundaryConditions& bc() const { return problem.bc; }

    void check(const std::string& name, bool pass, ordered_json value = nullptr)
    {
        ordered_json c = ordered_json::object();
        c["name"] = name;
        c["status"] = pass ? "pass" : "fail";
        if (!value.is_null())
            c["value"] = value;
        checks.push_back(c);
        failed = failed || !pass;
    }
    void info(const std::string& name, ordered_json value)
    {
        ordered_json c = ordered_json::object();
        c["name"] = name;
        c["status"] = "info";
        c["value"] = value;
        checks.push_back(c);
    }
};

[[noreturn]] void bad_flag(const std::string& what)
{
    throw Error(ErrorCode::InvalidParams, what);
}

ordered_json cj(cplx z)
{
    return ordered_json::array({z.real(), z.imag()});
}

ordered_json matrix_json(const CMatrix& M)
{
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < M.cols(); ++c)
            row.push_back(cj(M(r, c)));
        rows.push_back(row);
    }
    return rows;
}

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
    return buf;
}

std::vector<double> split_numbers(const std::string& s, std::size_t count, const std::string& flag)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(part, &used));
            if (used != part.size())
                bad_flag(flag + ": cannot read '" + part + "'");
        } catch (const std::logic_error&) {
            bad_flag(flag + ": cannot read '" + part + "'");
        }
    }
    if (out.size() != count)
        bad_flag(flag + ": expected " + std::to_string(count) + " comma-separated numbers");
    return out;
}

std::size_t edge_index(const MetricGraph& g, const std::string& id, const std::string& flag)
{
    auto j = g.find_edge(id);
    if (!j)
        bad_flag(flag + ": unknown edge '" + id + "'");
    return *j;
}

std::pair<std::size_t, double> edge_point(const MetricGraph& g, const std::string& s, const std::string& flag)
{
    auto colon = s.rfind(':');
    if (colon == std::string::npos)
        bad_flag(flag + ": expected edge:pos");
    const std::size_t j = edge_index(g, s.substr(0, colon), flag);
    const double x = split_numbers(s.substr(colon + 1), 1, flag)[0];
    if (x < 0.0 || (!g.is_external(j) && x > g.length(j)))
        bad_flag(flag + ": position outside edge '" + g.edge_id(j) + "'");
    return {j, x};
}

std::pair<std::size_t, End> edge_end(const MetricGraph& g, const std::string& s, const std::string& flag)
{
    auto colon = s.rfind(':');
    if (colon == std::string::npos)
        return {edge_index(g, s, flag), End::Initial};
    const std::string sign = s.substr(colon + 1);
    if (sign != "-" && sign != "+")
        bad_flag(flag + ": end must be '-' or '+'");
    return {edge_index(g, s.substr(0, colon), flag), sign == "-" ? End::Initial : End::Terminal};
}

std::string k_label(const MetricGraph& g, std::size_t idx)
{
    const std::size_t j = g.k_edge(idx);
    if (g.is_external(j))
        return g.edge_id(j);
    return g.edge_id(j) + (g.k_end(idx) == End::Initial ? ":-" : ":+");
}

cplx spectral_parameter(const Context& c, double default_kappa)
{
    if (c.opts.k) {
        auto v = split_numbers(*c.opts.k, 2, "--k");
        return {v[0], v[1]};
    }
    return {0.0, c.opts.kappa.value_or(default_kappa)};
}

std::optional<std::vector<ContinuityForm>> try_forms(const MetricGraph& g, const BoundaryConditions& bc)
{
    try {
        return continuity_forms(g, bc);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NotContinuous || e.code() == ErrorCode::NotLocalInput)
            return std::nullopt;
        throw;
    }
}

bool is_local(const MetricGraph& g, const BoundaryConditions& bc)
{
    try {
        decompose_local(g, bc);
        return true;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NotLocal)
            return false;
        throw;
    }
}

const char* kind_name(const ContinuityForm& f)
{
    return f.kind == ContinuityForm::Kind::Dirichlet ? "dirichlet" : "generic";
}

GraphFunction initial_data(const Context& c, double extent, double step)
{
    const MetricGraph& g = c.g();
    std::string spec = c.opts.psi0.value_or("bump:" + g.edge_id(0) + ":0.5:0.5");
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');)
        parts.push_back(p);
    if (parts.size() == 4 && parts[0] == "bump") {
        const std::size_t e = edge_index(g, parts[1], "--psi0");
        const double centre = split_numbers(parts[2], 1, "--psi0")[0];
        const double width = split_numbers(parts[3], 1, "--psi0")[0];
        if (!(width > 0.0))
            bad_flag("--psi0: width must be positive");
        return GraphFunction::sample(g, step, extent, [=](std::size_t j, double x) {
            const double u = (x - centre) / width;
            return cplx(j == e && std::abs(u) < 1.0 ? std::pow(std::cos(pi * u / 2.0), 2) : 0.0);
        });
    }
    if (parts.size() == 2 && parts[0] == "sine") {
        const std::size_t e = edge_index(g, parts[1], "--psi0");
        if (g.is_external(e))
            bad_flag("--psi0: sine data need an internal edge");
        const double a = g.length(e);
        return GraphFunction::sample(g, step, extent,
                                     [=](std::size_t j, double x) { return cplx(j == e ? std::sin(pi * x / a) : 0.0); });
    }
    if (parts.size() == 2 && parts[0] == "const") {
        const double v = split_numbers(parts[1], 1, "--psi0")[0];
        return GraphFunction::sample(g, step, extent, [=](std::size_t, double) { return cplx(v); });
    }
    bad_flag("--psi0: expected bump:edge:centre:width, sine:edge or const:value");
}

// Sum of nonnegative hats placed inside edges; continuous and zero at the vertices.
GraphFunction random_positive_data(const MetricGraph& g, std::mt19937_64& rng, double extent, double step)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    struct Hat {
        std::size_t edge;
        double centre, width, height;
    };
    std::vector<Hat> hats;
    for (int n = 0; n < 3; ++n) {
        const std::size_t e = static_cast<std::size_t>(u(rng) * double(g.num_edges())) % g.num_edges();
        const double len = g.is_external(e) ? 3.0 : g.length(e);
        const double width = (0.1 + 0.3 * u(rng)) * len;
        const double centre = width + (len - 2.0 * width) * u(rng);
        hats.push_back({e, centre, width, 0.5 + u(rng)});
    }
    return GraphFunction::sample(g, step, extent, [&](std::size_t j, double x) {
        double v = 0.0;
        for (const auto& h : hats)
            if (h.edge == j)
                v += h.height * std::max(0.0, 1.0 - std::abs(x - h.centre) / h.width);
        return cplx(v);
    });
}

void cmd_validate(Context& c)
{
    const MetricGraph& g = c.g();
    c.result["vertices"] = g.num_vertices();
    c.result["internal_edges"] = g.num_internal();
    c.result["external_edges"] = g.num_external();
    c.result["dim"] = g.dim();
    c.result["conditions"] = c.problem.global ? "global" : "per_vertex";
    c.result["tadpoles"] = g.has_tadpoles();
    c.result["local"] = is_local(g, c.bc());
    c.result["continuity"] = try_forms(g, c.bc()).has_value();
    c.check("rank", check_rank(c.bc().A(), c.bc().B()));
}

void cmd_classify(Context& c)
{
    ClassifyOptions co;
    co.tol *= c.tol_scale;
    auto r = classify_operator(c.bc(), co);
    c.result["self_adjoint"] = r.self_adjoint;
    c.result["re_ab_neg_semidef"] = r.re_ab_neg_semidef;
    c.result["max_eig_re_ab"] = r.max_eig_re_ab;
    c.result["im_ab_neg_semidef"] = r.im_ab_neg_semidef;
    c.result["max_eig_im_ab"] = r.max_eig_im_ab;
    c.result["self_adjoint_discrepancy"] = r.self_adjoint_discrepancy;
    c.result["rank_ok"] = r.rank_ok;
    ordered_json sc = ordered_json::array(), sk = ordered_json::array();
    bool all_sc = true, all_sk = true;
    for (auto [kappa, ok] : r.s_contraction) {
        sc.push_back({{"kappa", kappa}, {"contraction", ok}});
        all_sc = all_sc && ok;
    }
    for (auto [k, ok] : r.s_minus_k_contraction) {
        sk.push_back({{"k", k}, {"contraction", ok}});
        all_sk = all_sk && ok;
    }
    c.result["s_contraction"] = sc;
    c.result["s_minus_k_contraction"] = sk;
    c.result["accretivity_note"] = r.accretivity_note;

    const bool local = is_local(c.g(), c.bc());
    c.result["local"] = local;
    if (auto forms = try_forms(c.g(), c.bc())) {
        ordered_json vs = ordered_json::array();
        for (std::size_t v = 0; v < forms->size(); ++v) {
            const auto& f = (*forms)[v];
            ordered_json o = ordered_json::object();
            o["vertex"] = c.g().vertex_id(v);
            o["kind"] = kind_name(f);
            if (f.kind == ContinuityForm::Kind::Generic) {
                o["alpha"] = f.alpha;
                ordered_json gs = ordered_json::array();
                for (Eigen::Index i = 0; i < f.g.size(); ++i)
                    gs.push_back(cj(f.g(i)));
                o["g"] = gs;
                o["g_dot_h"] = cj(f.g_dot_h());
            }
            o["positivity"] = positivity_name(positivity_class(f).cls);
            o["substochastic"] = substochastic_check(f, 1.0).substochastic;
            vs.push_back(o);
        }
        c.result["continuity_forms"] = vs;
        if (!c.g().has_tadpoles())
            c.result["feller"] = feller_name(feller_check(c.g(), *forms));
    } else {
        c.result["continuity_forms"] = nullptr;
    }
    c.check("rank", r.rank_ok);
    c.check("accretive_iff_s_contraction", r.re_ab_neg_semidef == all_sc);
    c.check("dissipative_iff_s_minus_k_contraction", r.im_ab_neg_semidef == all_sk);
}

void cmd_smatrix(Context& c)
{
    const cplx k = spectral_parameter(c, 1.0);
    const CMatrix S = smatrix(c.bc(), k);
    ordered_json labels = ordered_json::array();
    for (std::size_t i = 0; i < c.g().dim(); ++i)
        labels.push_back(k_label(c.g(), i));
    c.result["k"] = cj(k);
    c.result["labels"] = labels;
    c.result["matrix"] = matrix_json(S);
    c.result["norm"] = spectral_norm(S);
    std::string csv = "row,col,re,im\n";
    for (Eigen::Index r = 0; r < S.rows(); ++r)
        for (Eigen::Index q = 0; q < S.cols(); ++q)
            csv += k_label(c.g(), r) + "," + k_label(c.g(), q) + "," + num(S(r, q).real()) + "," + num(S(r, q).imag()) + "\n";
    c.csv = csv;
}

void cmd_green(Context& c)
{
    const cplx k = spectral_parameter(c, 1.0);
    GreenKernel G(c.g(), c.bc(), k);
    std::vector<KernelSample> samples;
    if (c.opts.x || c.opts.y) {
        if (!c.opts.x || !c.opts.y)
            bad_flag("--x and --y go together");
        auto [j, x] = edge_point(c.g(), *c.opts.x, "--x");
        auto [jp, y] = edge_point(c.g(), *c.opts.y, "--y");
        samples.push_back({j, jp, x, y, G(j, x, jp, y)});
    } else {
        samples = sample_kernel(c.g(), G, c.opts.grid.value_or(16));
    }
    ordered_json recs = ordered_json::array();
    std::string csv = "edge_i,x,edge_j,y,re,im\n";
    for (const auto& s : samples) {
        ordered_json r = ordered_json::object();
        r["edge_i"] = c.g().edge_id(s.j);
        r["x"] = s.x;
        r["edge_j"] = c.g().edge_id(s.jp);
        r["y"] = s.y;
        r["re"] = s.value.real();
        r["im"] = s.value.imag();
        recs.push_back(r);
        csv += c.g().edge_id(s.j) + "," + num(s.x) + "," + c.g().edge_id(s.jp) + "," + num(s.y) + "," +
               num(s.value.real()) + "," + num(s.value.imag()) + "\n";
    }
    c.result["k"] = cj(k);
    c.result["records"] = recs;
    c.csv = csv;
}

void cmd_eigs(Context& c)
{
    auto range = split_numbers(c.opts.range.value_or("0,50"), 2, "--range");
    ScanOptions so;
    so.grid_points = c.opts.grid.value_or(so.grid_points);
    auto roots = eigenvalue_scan(c.g(), c.bc(), range[0], range[1], so);
    ordered_json kap = ordered_json::array(), lam = ordered_json::array();
    std::string csv = "kappa,lambda\n";
    for (double r : roots) {
        kap.push_back(r);
        lam.push_back(-r * r);
        csv += num(r) + "," + num(-r * r) + "\n";
    }
    c.result["range"] = range;
    c.result["grid_points"] = so.grid_points;
    c.result["roots"] = kap;
    c.result["eigenvalues"] = lam;
    c.csv = csv;
}

void cmd_feller(Context& c)
{
    const double kappa = c.opts.kappa.value_or(1.0);
    c.result["kappa"] = kappa;
    c.result["verdict"] = feller_name(feller_check(c.g(), c.bc()));
    auto fn = feller_sup_norm(c.g(), c.bc(), kappa, c.opts.grid.value_or(4001));
    c.result["sup_norm"] = fn.value;
    c.result["at"] = {{"edge", c.g().edge_id(fn.edge)}, {"x", fn.x}};
    c.result["bound"] = 1.0 / (kappa * kappa);
    c.check("sup_norm_le_inv_kappa_sq", fn.value <= 1.0 / (kappa * kappa) + 1e-10 * c.tol_scale,
            fn.value - 1.0 / (kappa * kappa));
}

void cmd_evolve(Context& c)
{
    if (!c.opts.t)
        bad_flag("evolve needs --t");
    const double t = *c.opts.t;
    const double step = 1.0 / 128;
    auto psi0 = initial_data(c, external_extent_for(t), step);
    GraphFunction psi;
    if (c.opts.method == "spectral") {
        auto ev = evolve_spectral(c.g(), c.bc(), psi0, t);
        psi = ev.psi;
        c.result["contour_error"] = ev.contour_error;
        c.result["interpolation_error"] = ev.interpolation_error;
        c.result["error_estimate"] = ev.error_estimate();
        c.result["contour_shift"] = ev.shift;
    } else if (c.opts.method == "fd") {
        psi = evolve_fd_oracle(c.g(), c.bc(), psi0, t, 1.0 / 256, std::min(1e-3, std::max(t, 1e-6) / 10.0));
    } else {
        bad_flag("--method must be spectral or fd");
    }
    c.result["t"] = t;
    c.result["method"] = c.opts.method;
    c.result["external_extent"] = external_extent_for(t);
    c.result["l2_norm_initial"] = psi0.l2_norm();
    c.result["l2_norm"] = psi.l2_norm();
    const int per_unit = c.opts.grid.value_or(16);
    if (per_unit <= 0)
        bad_flag("--grid must be positive");
    ordered_json samples = ordered_json::array();
    std::string csv = "edge_id,x,t,re,im\n";
    for (std::size_t j = 0; j < psi.edges.size(); ++j) {
        const double ext = psi.edges[j].extent();
        const int n = std::max(1, static_cast<int>(std::ceil(ext * per_unit)));
        for (int i = 0; i <= n; ++i) {
            const double x = ext * i / n;
            const cplx v = psi.edges[j].at(x);
            samples.push_back({{"edge_id", c.g().edge_id(j)}, {"x", x}, {"re", v.real()}, {"im", v.imag()}});
            csv += c.g().edge_id(j) + "," + num(x) + "," + num(t) + "," + num(v.real()) + "," + num(v.imag()) + "\n";
        }
    }
    c.result["samples"] = samples;
    c.csv = csv;
}

void cmd_walks(Context& c)
{
    if (!c.opts.from || !c.opts.to)
        bad_flag("walks needs --from and --to");
    auto [jp, sp] = edge_end(c.g(), *c.opts.from, "--from");
    auto [j, s] = edge_end(c.g(), *c.opts.to, "--to");
    const double cutoff = c.opts.cutoff.value_or(c.g().num_internal() ? 3.0 * c.g().max_internal_length() : 0.0);
    const double kappa = c.opts.kappa.value_or(1.0);
    auto walks = enumerate_walks(c.g(), jp, sp, j, s, cutoff);
    std::optional<std::vector<CMatrix>> vs;
    try {
        vs = vertex_smatrices(c.g(), c.bc(), kappa);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NotLocal)
            throw;
        c.warnings.push_back("conditions are not local; weights omitted");
    }
    ordered_json arr = ordered_json::array();
    std::string csv = "edges,vertices,comb_len,metric_len,reflectionless,weight_re,weight_im\n";
    for (const auto& w : walks) {
        ordered_json o = ordered_json::object();
        ordered_json es = ordered_json::array(), vv = ordered_json::array();
        std::string es_s, vv_s;
        for (auto e : w.edges) {
            es.push_back(c.g().edge_id(e));
            es_s += (es_s.empty() ? "" : " ") + c.g().edge_id(e);
        }
        for (auto v : w.vertices) {
            vv.push_back(c.g().vertex_id(v));
            vv_s += (vv_s.empty() ? "" : " ") + c.g().vertex_id(v);
        }
        o["edges"] = es;
        o["vertices"] = vv;
        o["comb_len"] = w.comb_len;
        o["metric_len"] = w.metric_len;
        o["reflectionless"] = w.reflectionless();
        cplx W = vs ? walk_weight(c.g(), *vs, w) : cplx(0.0);
        if (vs) {
            o["weight_re"] = W.real();
            o["weight_im"] = W.imag();
        }
        arr.push_back(o);
        csv += es_s + "," + vv_s + "," + std::to_string(w.comb_len) + "," + num(w.metric_len) + "," +
               (w.reflectionless() ? "true" : "false") + "," + (vs ? num(W.real()) + "," + num(W.imag()) : ",") + "\n";
    }
    c.result["kappa"] = kappa;
    c.result["cutoff"] = cutoff;
    c.result["walks"] = arr;
    c.csv = csv;
}

// Runs one verification step; library errors become warnings.
void guarded(Context& c, const std::string& name, const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        c.warnings.push_back(name + " skipped: " + e.what());
    }
}

void cmd_verify(Context& c)
{
    const MetricGraph& g = c.g();
    const BoundaryConditions& bc = c.bc();
    std::mt19937_64 rng(c.opts.seed);
    const double s = c.tol_scale;
    c.result["seed"] = c.opts.seed;

    ClassificationReport cls;
    guarded(c, "classification", [&] {
        cls = classify_operator(bc);
        bool all_sc = true, all_sk = true;
        for (auto [kappa, ok] : cls.s_contraction)
            all_sc = all_sc && ok;
        for (auto [k, ok] : cls.s_minus_k_contraction)
            all_sk = all_sk && ok;
        c.check("rank", cls.rank_ok);
        c.check("accretive_iff_s_contraction", cls.re_ab_neg_semidef == all_sc);
        c.check("dissipative_iff_s_minus_k_contraction", cls.im_ab_neg_semidef == all_sk);
    });

    auto forms = try_forms(g, bc);
    bool positive = false;
    if (forms)
        positive = std::all_of(forms->begin(), forms->end(), [](const ContinuityForm& f) {
            return positivity_class(f).cls != PositivityClass::NotPositive;
        });
    c.result["continuity"] = forms.has_value();
    c.result["positive_class"] = positive;

    if (forms && !g.has_tadpoles()) {
        guarded(c, "kernel_positivity", [&] {
            double min_re = 0.0;
            for (double kappa : {5.0, 10.0, 20.0}) {
                GreenKernel G(g, bc, cplx(0.0, kappa));
                for (const auto& smp : sample_kernel(g, G, 8))
                    min_re = std::min(min_re, smp.value.real());
            }
            if (positive)
                c.check("kernel_positivity", min_re >= -1e-12 * s, min_re);
            else
                c.info("kernel_min_entry", min_re);
        });
        auto verdict = feller_check(g, *forms);
        c.result["feller"] = feller_name(verdict);
        if (verdict == FellerVerdict::YesIff || verdict == FellerVerdict::YesSufficient)
            guarded(c, "feller_bound", [&] {
                auto fn = feller_sup_norm(g, bc, 1.0, 1001);
                c.check("feller_bound", fn.value <= 1.0 + 1e-10 * s, fn.value);
            });
    }

    guarded(c, "semigroup", [&] {
        const std::vector<double> times{0.01, 0.1, 1.0};
        auto psi0 = random_positive_data(g, rng, external_extent_for(times.back()), 1.0 / 128);
        auto rep = verify_semigroup_properties(g, bc, psi0, times, {}, 1e-6 * s);
        double worst_norm = -1e300, worst_min = 0.0, worst_cont = 0.0;
        bool contraction = true, pos = true, cont = true;
        for (const auto& ch : rep.checks) {
            worst_norm = std::max(worst_norm, ch.norm_t - ch.norm0);
            worst_min = std::min(worst_min, ch.min_real);
            worst_cont = std::max(worst_cont, ch.continuity);
            contraction = contraction && ch.contraction;
            pos = pos && ch.positive;
            cont = cont && ch.continuous;
        }
        if (rep.accretive)
            c.check("semigroup_contraction", contraction, worst_norm);
        else
            c.info("semigroup_norm_growth", worst_norm);
        if (rep.positive_class)
            c.check("semigroup_positivity", pos, worst_min);
        else
            c.info("semigroup_min_value", worst_min);
        if (rep.continuity_class)
            c.check("semigroup_continuity", cont, worst_cont);
    });

    if (forms && !positive && !g.has_tadpoles())
        guarded(c, "positivity_witness", [&] {
            auto w = search_positivity_witness(g, bc, 0.05, c.opts.seed);
            if (w)
                c.info("positivity_witness", {{"attempt", w->attempt}, {"edge", g.edge_id(w->edge)}, {"x", w->x}, {"value", w->value}});
            else
                c.info("positivity_witness", nullptr);
        });

    if (!g.has_tadpoles() && is_local(g, bc))
        guarded(c, "walk_series", [&] {
            const double kappa = 1.5 * series_threshold(g, bc);
            GreenKernel G(g, bc, cplx(0.0, kappa));
            std::uniform_int_distribution<std::size_t> pe(0, g.num_edges() - 1);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            double worst = -1e300;
            bool ok = true;
            for (int n = 0; n < 5; ++n) {
                const std::size_t j = pe(rng), jp = pe(rng);
                const double x = u(rng) * (g.is_external(j) ? 2.0 : g.length(j));
                const double y = u(rng) * (g.is_external(jp) ? 2.0 : g.length(jp));
                auto ser = green_via_walks(g, bc, kappa, j, x, jp, y, 2.0 * (g.num_internal() ? g.max_internal_length() : 1.0));
                const double err = std::abs(ser.value - G(j, x, jp, y));
                worst = std::max(worst, err - ser.tail_bound);
                ok = ok && err <= ser.tail_bound + 1e-14 * s;
            }
            c.check("walk_series_tail", ok, worst);
        });
}

const std::map<std::string, std::function<void(Context&)>>& commands()
{
    static const std::map<std::string, std::function<void(Context&)>> table{
        {"validate", cmd_validate}, {"classify", cmd_classify}, {"smatrix", cmd_smatrix},
        {"green", cmd_green},       {"eigs", cmd_eigs},         {"feller", cmd_feller},
        {"evolve", cmd_evolve},     {"walks", cmd_walks},       {"verify", cmd_verify}};
    return table;
}

bool supports_csv(const std::string& cmd)
{
    return cmd == "smatrix" || cmd == "green" || cmd == "eigs" || cmd == "evolve" || cmd == "walks";
}

std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace

std::uint64_t fnv1a64(const std::string& bytes)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

RunResult run(const CliOptions& opts)
{
    ordered_json report = ordered_json::object();
    report["schema"] = report_schema;
    report["command"] = opts.command;
    report["input"] = opts.input;
    ordered_json warnings = ordered_json::array();
    try {
        auto it = commands().find(opts.command);
        if (it == commands().end())
            throw Error(ErrorCode::UnknownCommand, "unknown command '" + opts.command + "'");
        if (opts.format != "json" && opts.format != "csv")
            bad_flag("--format must be json or csv");
        if (opts.format == "csv" && !supports_csv(opts.command))
            bad_flag("--format csv is not available for " + opts.command);

        double tol_scale = 1.0;
        if (const char* env = std::getenv("MGSG_TOL_OVERRIDE")) {
            try {
                tol_scale = std::stod(env);
            } catch (const std::logic_error&) {
                tol_scale = 0.0;
            }
            if (!(tol_scale > 0.0))
                bad_flag("MGSG_TOL_OVERRIDE must be a positive number");
            warnings.push_back("tolerances scaled by MGSG_TOL_OVERRIDE = " + num(tol_scale));
        }

        const std::string text = read_text_file(opts.input);
        report["input_digest"] = "fnv1a64:" + hex64(fnv1a64(text));
        Context c(opts, parse_spec_text(text));
        c.tol_scale = tol_scale;
        c.warnings = warnings;
        it->second(c);
        if (opts.format == "csv")
            return {c.failed ? 1 : 0, c.csv};
        report["status"] = c.failed ? "check_failed" : "ok";
        report["result"] = c.result;
        report["checks"] = c.checks;
        report["warnings"] = c.warnings;
        return {c.failed ? 1 : 0, report.dump(2) + "\n"};
    } catch (const Error& e) {
        report["status"] = "error";
        report["error"] = {{"code", error_name(e.code())}, {"message", e.what()}};
    } catch (const std::exception& e) {
        report["status"] = "error";
        report["error"] = {{"code", "Internal"}, {"message", e.what()}};
    }
    report["warnings"] = warnings;
    return {2, report.dump(2) + "\n"};
}

} // namespace mgsg
