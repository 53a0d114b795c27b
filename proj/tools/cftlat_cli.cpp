// Command-line front end: model data tables, the one-hole channel
// comparison, and the lattice-model outputs.

#include <CLI11.hpp>
#include <json.hpp>

#include "cftlat/anomaly.hpp"
#include "cftlat/channels.hpp"
#include "cftlat/lattice.hpp"
#include "cftlat/runconfig.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

using namespace cftlat;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

using clk = std::chrono::steady_clock;

std::vector<KacLabel> symmetry_set(const MinimalModel& m, const std::string& name) {
    if (name == "all") return label_set_all(m);
    if (name == "first-row") return label_set_first_row(m);
    if (name == "z2") return label_set_z2(m);
    std::vector<KacLabel> out;
    std::istringstream ss(name);
    std::string tok;
    while (std::getline(ss, tok, ';')) {
        auto comma = tok.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("symmetry: expected r,s pairs separated by ';'");
        out.push_back(m.canonical(
            {std::stoi(tok.substr(0, comma)), std::stoi(tok.substr(comma + 1))}));
    }
    if (!m.fusion_closed(out))
        throw std::invalid_argument("symmetry: explicit label set is not fusion closed");
    return out;
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    std::ofstream f(dir / name);
    if (!f) throw std::runtime_error("cannot open output file " + (dir / name).string());
    f.precision(17);
    return f;
}

json base_summary(const RunConfig& cfg, double seconds) {
    json j;
    j["schema_version"] = 1;
    j["model"] = {{"p", cfg.p}, {"q", cfg.q}};
    j["precision_digits"] = cfg.precision_digits;
    j["cutoffs"] = {{"open_level", cfg.open_level},
                    {"closed_weight", cfg.closed_weight},
                    {"series_order", cfg.series_order},
                    {"trace_points", cfg.trace_points}};
    j["quad_tol"] = cfg.quad_tol;
    j["wall_seconds"] = seconds;
    j["cache_dir"] = cache_dir().string();
    const CacheStats& st = cache_stats();
    j["cache"] = {{"f_hits", st.f_hits},
                  {"f_misses", st.f_misses},
                  {"anomaly_hits", st.anomaly_hits},
                  {"anomaly_misses", st.anomaly_misses}};
    return j;
}

int cmd_model_data(const RunConfig& cfg) {
    auto t0 = clk::now();
    MinimalModel m(cfg.p, cfg.q);
    fs::path dir = fs::path(cfg.out_dir);

    auto w = open_out(dir, "weights.csv");
    w << "r,s,h_numerator,h_denominator\n";
    for (const auto& l : m.labels()) {
        Rational h = m.conformal_weight(l);
        w << l.r << ',' << l.s << ',' << numerator(h) << ',' << denominator(h) << '\n';
    }

    auto fz = open_out(dir, "fusion.csv");
    fz << "i_r,i_s,j_r,j_s,k_r,k_s,N\n";
    for (const auto& i : m.labels())
        for (const auto& j : m.labels())
            for (const auto& k : m.labels())
                fz << i.r << ',' << i.s << ',' << j.r << ',' << j.s << ',' << k.r << ','
                   << k.s << ',' << m.fusion_coeff(i, j, k) << '\n';

    auto sm = open_out(dir, "smatrix.csv");
    sm << "i_r,i_s,j_r,j_s,S\n";
    for (const auto& i : m.labels())
        for (const auto& j : m.labels())
            sm << i.r << ',' << i.s << ',' << j.r << ',' << j.s << ','
               << to_double(m.s_matrix(i, j)) << '\n';

    auto dm = open_out(dir, "dims.csv");
    dm << "r,s,dim\n";
    for (const auto& l : m.labels())
        dm << l.r << ',' << l.s << ',' << to_double(m.quantum_dim(l)) << '\n';

    auto F = FSymbols::cached(m);
    F->save(dir / ("fsymbols_p" + std::to_string(cfg.p) + "_q" + std::to_string(cfg.q) +
                   ".txt"));

    Rational c = m.central_charge();
    json j = base_summary(cfg, std::chrono::duration<double>(clk::now() - t0).count());
    j["central_charge"] = {{"numerator", numerator(c).convert_to<long long>()},
                           {"denominator", denominator(c).convert_to<long long>()}};
    j["num_labels"] = m.num_labels();
    j["num_fsymbols"] = F->size();
    auto js = open_out(dir, "model-data.json");
    js << j.dump(2) << '\n';
    std::cout << "model-data: " << m.num_labels() << " labels, " << F->size()
              << " F-symbols -> " << dir.string() << "\n";
    return kOk;
}

int cmd_one_hole(const RunConfig& cfg, bool no_anomaly) {
    auto t0 = clk::now();
    MinimalModel m(cfg.p, cfg.q);
    if (m.q() != m.p() + 1)
        throw std::invalid_argument("one-hole: unitary models M(p, p+1) only");
    if (cfg.ratio_grid.empty()) {
        std::cerr << "one-hole: empty grid, nothing to do\n";
        return kOk;
    }
    std::complex<double> tau(0.5, std::sqrt(3.0) / 2); // hexagonal torus

    size_t n = cfg.ratio_grid.size();
    std::vector<OneHolePoint> open_pts(n), closed_pts(n);

    auto F = FSymbols::cached(m);
    TorusOnePoint top(m, cfg.closed_weight, 6);
    Real delta0 = mp::pow(m.s_matrix(m.vacuum(), m.vacuum()), Real(3) / 2);

    unsigned nthreads = cfg.threads > 0
                            ? static_cast<unsigned>(cfg.threads)
                            : std::max(1u, std::thread::hardware_concurrency());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= n) break;
            double r = cfg.ratio_grid[i];
            double t = t_of_ratio(r);
            TriangleGeometry geom(t, cfg.series_order, cfg.trace_points);
            double d = to_double(geom.d());
            double R = to_double(geom.R());
            TriangleAmplitudes amps(m, F, geom, d, cfg.open_level, cfg.quad_tol);
            OneHolePoint op = one_hole_open(amps, delta0);
            op.r_over_d = r;
            open_pts[i] = op;
            closed_pts[i] = one_hole_closed(top, R, d, tau, cfg.closed_weight);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 0; k + 1 < nthreads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    fs::path dir = fs::path(cfg.out_dir);
    auto csv = open_out(dir, "one-hole.csv");
    csv << "R_over_d,open_raw,open_anomaly,closed_raw,closed_anomaly,diff\n";
    double worst = 0;
    for (size_t i = 0; i < n; ++i) {
        const auto& op = open_pts[i];
        const auto& cl = closed_pts[i];
        csv << cfg.ratio_grid[i] << ',' << op.raw << ',' << op.corrected << ',' << cl.raw
            << ',' << cl.corrected << ',' << (op.corrected - cl.corrected) << '\n';
        double rel = no_anomaly ? std::fabs(op.raw - cl.raw) / std::fabs(cl.raw)
                                : std::fabs(op.corrected - cl.corrected) /
                                      std::fabs(cl.corrected);
        worst = std::max(worst, rel);
    }

    json j = base_summary(cfg, std::chrono::duration<double>(clk::now() - t0).count());
    j["tau"] = {{"re", tau.real()}, {"im", tau.imag()}};
    j["anomaly_included"] = !no_anomaly;
    j["worst_rel_diff"] = worst;
    j["grid_points"] = n;
    auto js = open_out(dir, "one-hole.json");
    js << j.dump(2) << '\n';
    std::cout << "one-hole: worst relative channel difference "
              << (no_anomaly ? "(no anomaly) " : "") << worst << "\n";
    return kOk;
}

int cmd_ising_map(const RunConfig& cfg, double ratio) {
    MinimalModel m(cfg.p, cfg.q);
    auto r = ising_map(m, ratio);
    json j;
    j["ratio"] = ratio;
    j["x"] = r.x;
    j["beta"] = r.beta;
    j["beta_min"] = r.beta_min;
    j["beta_star"] = r.beta_star;
    j["covers_critical"] = r.covers_critical;
    std::cout << j.dump(2) << "\n";
    return kOk;
}

int cmd_rsos(const RunConfig& cfg, double t) {
    MinimalModel m(cfg.p, cfg.q);
    RsosWeights w = rsos_weights(m, t, cfg.quad_tol);
    fs::path dir = fs::path(cfg.out_dir);
    auto csv = open_out(dir, "rsos-weights.csv");
    csv << "a,b,c,T\n";
    for (int a = 1; a <= w.p; ++a)
        for (int b = 1; b <= w.p; ++b)
            for (int c = 1; c <= w.p; ++c)
                if (w.T(a, b, c) != 0)
                    csv << a << ',' << b << ',' << c << ',' << w.T(a, b, c) << '\n';
    std::cout << "rsos-weights: p=" << w.p << " x=" << w.x << " F=" << w.F << " -> "
              << (dir / "rsos-weights.csv").string() << "\n";
    return kOk;
}

int cmd_loop_check(const RunConfig& cfg, const std::string& lattice, double t) {
    MinimalModel m(cfg.p, cfg.q);
    auto x = lattice.find('x');
    if (x == std::string::npos) throw std::invalid_argument("lattice: expected MxN");
    int M = std::stoi(lattice.substr(0, x)), N = std::stoi(lattice.substr(x + 1));
    LatticeSpec lat(M, N);
    auto t0 = clk::now();
    double res = loop_equivalence_residual(m, t, lat, cfg.quad_tol);
    json j;
    j["lattice"] = {{"M", M}, {"N", N}};
    j["sites"] = lat.n_sites();
    j["triangles"] = lat.n_triangles();
    j["t"] = t;
    j["residual"] = res;
    j["wall_seconds"] = std::chrono::duration<double>(clk::now() - t0).count();
    std::cout << j.dump(2) << "\n";
    return res < 1e-10 ? kOk : kToleranceFailure;
}

int cmd_cut_curve(const RunConfig& cfg, double t) {
    TriangleGeometry geom(t, cfg.series_order, cfg.trace_points);
    fs::path dir = fs::path(cfg.out_dir);
    auto csv = open_out(dir, "cut-curve.csv");
    csv << "t,j,x,y,kappa\n";
    auto pts = cut_polyline(geom);
    auto kap = polyline_curvature(pts);
    for (size_t j = 0; j < pts.size(); ++j)
        csv << t << ',' << j << ',' << pts[j].real() << ',' << pts[j].imag() << ','
            << kap[j] << '\n';
    std::cout << "cut-curve: " << pts.size() << " points, theta* = "
              << geom.theta_star() << " -> " << (dir / "cut-curve.csv").string() << "\n";
    return kOk;
}

int cmd_cloaking_table(const RunConfig& cfg, double t) {
    MinimalModel m(cfg.p, cfg.q);
    auto F = FSymbols::cached(m);
    auto symmetry = symmetry_set(m, cfg.symmetry);
    TriangleGeometry geom(t, cfg.series_order, cfg.trace_points);
    double d = to_double(geom.d());
    // lowest non-trivial cutoff: the smallest positive weight appearing in
    // the boundary spectrum of the chosen symmetry set
    Rational hmax(-1);
    for (const auto& a : symmetry)
        for (const auto& b : symmetry)
            for (const auto& i : m.labels()) {
                if (!m.fusion_coeff(i, b, a)) continue;
                Rational h = m.conformal_weight(i);
                if (h > 0 && (hmax < 0 || h < hmax)) hmax = h;
            }
    if (hmax < 0) hmax = 0;
    TriangleAmplitudes amps(m, F, geom, d, 0, cfg.quad_tol);
    Real delta0 = mp::pow(m.s_matrix(m.vacuum(), m.vacuum()), Real(3) / 2);
    auto table = cloaking_triangle_table(amps, symmetry, delta0, hmax);

    fs::path dir = fs::path(cfg.out_dir);
    auto csv = open_out(dir, "cloaking-table.csv");
    csv << "# p=" << cfg.p << " q=" << cfg.q << " symmetry=" << cfg.symmetry
        << " h_max=" << numerator(hmax) << "/" << denominator(hmax) << " t=" << t
        << " d=" << d << " delta0=S11^{3/2} precision=" << kPrecisionDigits << "\n";
    csv << "x,y,z,value\n";
    size_t n = table.basis.size();
    for (size_t x = 0; x < n; ++x)
        for (size_t y = 0; y < n; ++y)
            for (size_t z = 0; z < n; ++z)
                if (table.at(x, y, z) != 0)
                    csv << x << ',' << y << ',' << z << ',' << to_double(table.at(x, y, z))
                        << '\n';
    auto states = open_out(dir, "cloaking-basis.csv");
    states << "index,left_r,left_s,right_r,right_s,rep_r,rep_s,level,alpha\n";
    for (size_t i = 0; i < n; ++i) {
        const auto& s = table.basis[i];
        states << i << ',' << s.left.r << ',' << s.left.s << ',' << s.right.r << ','
               << s.right.s << ',' << s.rep.r << ',' << s.rep.s << ',' << s.level << ','
               << s.alpha << '\n';
    }
    std::cout << "cloaking-table: " << n << " boundary states -> "
              << (dir / "cloaking-table.csv").string() << "\n";
    return kOk;
}

int cmd_phase_points(const RunConfig& cfg, const std::string& prange) {
    int plo = cfg.p, phi = cfg.p;
    if (!prange.empty()) {
        auto dots = prange.find("..");
        if (dots != std::string::npos) {
            plo = std::stoi(prange.substr(0, dots));
            phi = std::stoi(prange.substr(dots + 2));
        } else {
            plo = phi = std::stoi(prange);
        }
    }
    fs::path dir = fs::path(cfg.out_dir);
    auto csv = open_out(dir, "phase-points.csv");
    csv << "p,x_c,x_0,x_max,c_c,c_0,R_c_over_d,R_0_over_d\n";
    for (int p = plo; p <= phi; ++p) {
        PhasePoints pp = phase_points(p);
        if (!(pp.x_c < pp.x_0 && pp.x_0 < pp.x_max)) {
            std::cerr << "phase-points: ordering violated at p=" << p << "\n";
            return kToleranceFailure;
        }
        csv << p << ',' << pp.x_c << ',' << pp.x_0 << ',' << pp.x_max << ','
            << to_double(to_real(pp.c_c)) << ',' << to_double(to_real(pp.c_0)) << ','
            << pp.R_c_over_d << ',' << pp.R_0_over_d << '\n';
    }
    std::cout << "phase-points: p=" << plo << ".." << phi << " -> "
              << (dir / "phase-points.csv").string() << "\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    // config file first, then flags override
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") {
            try {
                cfg = load_config_file(argv[i + 1]);
            } catch (const std::exception& e) {
                std::cerr << "config error: " << e.what() << "\n";
                return kConfigError;
            }
        }

    CLI::App app{"cftlat: minimal-model CFT data, one-hole channel comparison, "
                 "and the induced lattice/loop models"};
    app.require_subcommand(1);
    std::string config_path, grid_text;
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--threads", cfg.threads, "worker pool size (0: logical cores)");
    app.add_option("--cache-dir", cfg.cache_dir, "cache directory");
    app.add_option("--out", cfg.out_dir, "output directory");

    auto add_model_opts = [&](CLI::App* c) {
        c->add_option("--p", cfg.p, "Kac index p");
        c->add_option("--q", cfg.q, "Kac index q");
    };

    auto* md = app.add_subcommand("model-data", "exact chiral data tables and F-symbols");
    add_model_opts(md);

    auto* oh = app.add_subcommand("one-hole",
                                  "torus one-hole partition function, both channels");
    add_model_opts(oh);
    bool no_anomaly = false;
    oh->add_option("--grid", grid_text, "R/d grid: lo:hi:n or comma list");
    oh->add_flag("--no-anomaly", no_anomaly, "report the comparison without anomaly factors");
    oh->add_option("--open-level", cfg.open_level, "open channel descendant level");
    oh->add_option("--closed-weight", cfg.closed_weight, "closed channel weight cutoff");
    oh->add_option("--quad-tol", cfg.quad_tol, "anomaly quadrature tolerance");
    oh->add_option("--series-order", cfg.series_order, "phi0 series order");
    oh->add_option("--trace-points", cfg.trace_points, "cut curve points");

    auto* lat = app.add_subcommand("lattice", "lattice model outputs");
    lat->require_subcommand(1);
    auto* im = lat->add_subcommand("ising-map", "x(R), beta and the critical range");
    add_model_opts(im);
    double ratio = 0.3;
    im->add_option("--ratio", ratio, "R/d in (0, 1/2)");
    auto* rw = lat->add_subcommand("rsos-weights", "first-row RSOS vertex weights");
    add_model_opts(rw);
    double tparam = 0.5;
    rw->add_option("--t", tparam, "geometry parameter t");
    auto* lc = lat->add_subcommand("loop-check", "RSOS vs loop-model enumeration");
    add_model_opts(lc);
    std::string lattice_text = "2x2";
    lc->add_option("--lattice", lattice_text, "torus size MxN");
    lc->add_option("--t", tparam, "geometry parameter t");
    auto* ph = lat->add_subcommand("phase-points", "loop-model critical points");
    std::string prange;
    ph->add_option("--p", prange, "p value or range a..b");
    auto* cc = app.add_subcommand("cut-curve", "dump the traced cut preimage");
    cc->add_option("--t", tparam, "geometry parameter t");
    cc->add_option("--series-order", cfg.series_order, "phi0 series order");
    cc->add_option("--trace-points", cfg.trace_points, "number of points");
    auto* ct = app.add_subcommand("cloaking-table",
                                  "triangle amplitude table at the lowest cutoff");
    add_model_opts(ct);
    ct->add_option("--t", tparam, "geometry parameter t");
    ct->add_option("--symmetry", cfg.symmetry, "all | first-row | z2 | explicit");

    for (CLI::App* sc : {md, oh, lat, im, rw, lc, ph, cc, ct}) sc->fallthrough();
    CLI11_PARSE(app, argc, argv);

    try {
        if (!grid_text.empty()) cfg.ratio_grid = parse_grid(grid_text);
        if (!cfg.cache_dir.empty()) setenv("CFTLAT_CACHE_DIR", cfg.cache_dir.c_str(), 1);
        cfg.validate();

        if (md->parsed()) return cmd_model_data(cfg);
        if (oh->parsed()) return cmd_one_hole(cfg, no_anomaly);
        if (im->parsed()) return cmd_ising_map(cfg, ratio);
        if (rw->parsed()) return cmd_rsos(cfg, tparam);
        if (lc->parsed()) return cmd_loop_check(cfg, lattice_text, tparam);
        if (ph->parsed()) return cmd_phase_points(cfg, prange);
        if (cc->parsed()) return cmd_cut_curve(cfg, tparam);
        if (ct->parsed()) return cmd_cloaking_table(cfg, tparam);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::overflow_error& e) {
        std::cerr << "size overflow: " << e.what() << "\n";
        return kSizeOverflow;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kToleranceFailure;
    }
    return kOk;
}
