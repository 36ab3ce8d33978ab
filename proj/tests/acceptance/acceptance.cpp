// Acceptance checks 1-9. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include "mtinv/diagnostics.hpp"
#include "mtinv/harness.hpp"
#include "mtinv/inverse.hpp"
#include "mtinv/minimizers.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

using namespace mtinv;
using Eigen::VectorXd;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const Outcome& o)
{
    std::printf("AC%d %s: %s (%s)\n", id, o.pass ? "PASS" : "FAIL", title.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) {
        ++failures;
    }
}

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::vector<Complex> normalized_truth(const MaterialSystem& sys, const VectorXd& phi, const std::vector<double>& f)
{
    std::vector<Complex> out;
    for (double x : f) {
        out.push_back(forward_permittivity(sys, phi, x) / sys.normalizer_permittivity(x));
    }
    return out;
}

Outcome roundtrip()
{
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    double worst = 0.0;
    std::ostringstream ms;
    for (const auto& sys : {ms1(), ms2(), ms3()}) {
        std::size_t m = 1;
        while (true) {
            const auto f = select_frequencies(sys, m);
            VectorXd mid(3);
            mid << 0.75, 0.15, 0.10;
            if (sensitivity_at(sys, f, normalized_truth(sys, mid, f)).rank == 2) {
                break;
            }
            ++m;
        }
        ms << sys.name << ":m=" << m << ' ';
        const auto f = select_frequencies(sys, m);
        for (std::uint64_t s = 0; s < 100; ++s) {
            SampleRng rng(2024, s);
            const VectorXd phi = sample_phi_true(sys.sample_floor, rng);
            MeasurementSet meas;
            meas.frequencies_hz = f;
            meas.eps_hat = normalized_truth(sys, phi, f);
            meas.normalizer_index = sys.normalizer_index;
            const RecoveryReport r = invert(sys, meas);
            const double err = (r.phi_star - phi).cwiseAbs().maxCoeff();
            worst = std::max(worst, err);
            if (!(err <= 1e-5)) {
                o.pass = false;
            }
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 10.0) {
        o.pass = false;
    }
    o.detail = ms.str() + "max err " + fmt("%.3g", worst) + ", " + fmt("%.2f", secs) + " s";
    return o;
}

Outcome two_component()
{
    Outcome o;
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> rd(-0.9, 8.0);
    std::uniform_real_distribution<double> pd(0.02, 0.98);
    double worst_min = 0.0;
    double worst_cc = 0.0;
    int done = 0;
    while (done < 50) {
        const double r1 = rd(gen);
        if (std::abs(r1) < 0.05) {
            continue;
        }
        const double phi1 = pd(gen);
        const std::vector<Complex> r{{r1, 0.0}};
        const PQVectors pq = build_pq(r);
        VectorXd phi(2);
        phi << 1.0 - phi1, phi1;
        const double eps_hat = pq.ratio(phi).real();
        const double closed = mtinv::testing::two_phase_phi1(eps_hat, r1);

        const MinimizerSet set = simplex_minimizers(build_u(pq, eps_hat));
        double via_min = std::nan("");
        if (set.generators.size() == 1) {
            via_min = set.generators[0][1];
        }
        const RecoveryReport cc = solve_cc(assemble_cc(pq, eps_hat, false));
        const double e1 = std::abs(via_min - closed);
        const double e2 = cc.status == LPStatus::Optimal ? std::abs(cc.phi_star[1] - closed) : kInf;
        worst_min = std::max(worst_min, std::isnan(e1) ? kInf : e1);
        worst_cc = std::max(worst_cc, e2);
        ++done;
    }
    o.pass = worst_min <= 1e-8 && worst_cc <= 1e-8;
    o.detail = "minimizer max dev " + fmt("%.2g", worst_min) + ", LP max dev " + fmt("%.2g", worst_cc);
    return o;
}

Outcome ordered_combinatorics()
{
    using Subset = std::vector<std::size_t>;
    const std::map<Subset, std::vector<double>> expected{
        {{}, {1.0, 0.0, 0.0, 0.0}},
        {{1}, {1.0 / 2, 1.0 / 2, 0.0, 0.0}},
        {{2}, {1.0 / 2, 0.0, 1.0 / 2, 0.0}},
        {{3}, {1.0 / 2, 0.0, 0.0, 1.0 / 2}},
        {{1, 2}, {1.0 / 3, 1.0 / 3, 1.0 / 3, 0.0}},
        {{2, 3}, {1.0 / 3, 0.0, 1.0 / 3, 1.0 / 3}},
        {{1, 3}, {1.0 / 3, 1.0 / 3, 0.0, 1.0 / 3}},
        {{1, 2, 3}, {1.0 / 4, 1.0 / 4, 1.0 / 4, 1.0 / 4}},
    };
    const std::set<std::pair<Subset, Subset>> expected_edges{
        {{}, {1}},        {{}, {2}},        {{}, {3}},        {{1}, {1, 2}},
        {{1}, {1, 3}},    {{2}, {1, 2}},    {{2}, {2, 3}},    {{3}, {1, 3}},
        {{3}, {2, 3}},    {{1, 2}, {1, 2, 3}}, {{2, 3}, {1, 2, 3}}, {{1, 3}, {1, 2, 3}},
    };

    Outcome o;
    const auto vertices = ordered_vertices(4);
    std::map<Subset, std::vector<double>> got;
    for (const auto& v : vertices) {
        got[v.subset] = std::vector<double>(v.phi.data(), v.phi.data() + v.phi.size());
    }
    const bool vertices_ok = vertices.size() == 8 && got == expected;

    std::set<std::pair<Subset, Subset>> got_edges;
    const auto edges = ordered_edges(4);
    for (const auto& e : edges) {
        Subset to = e.subset;
        to.push_back(e.k);
        std::sort(to.begin(), to.end());
        got_edges.insert({e.subset, to});
    }
    const bool edges_ok = edges.size() == 12 && got_edges == expected_edges;
    o.pass = vertices_ok && edges_ok;
    o.detail = std::to_string(vertices.size()) + " vertices " + (vertices_ok ? "match" : "differ") + ", " +
               std::to_string(edges.size()) + " edges " + (edges_ok ? "match" : "differ");
    return o;
}

struct FullCampaign {
    std::vector<CampaignResult> results;
};

FullCampaign run_full_campaign()
{
    FullCampaign out;
    CampaignOptions opt;
    opt.m_values = {1, 2, 3, 4, 5};
    opt.samples = 1000;
    opt.noise = {0.1, 0.1, 42};
    for (const auto& sys : {ms1(), ms2(), ms3()}) {
        out.results.push_back(run_campaign(sys, opt));
    }
    return out;
}

Outcome bound_validity(const FullCampaign& fc)
{
    Outcome o;
    std::size_t checked = 0;
    std::size_t violations = 0;
    std::size_t failed = 0;
    double tightest = kInf;
    for (const auto& res : fc.results) {
        for (const auto& r : res.runs) {
            if (r.status != LPStatus::Optimal) {
                ++failed;
                continue;
            }
            ++checked;
            if (!(r.err_inf <= r.bound + 1e-8)) {
                ++violations;
            }
            tightest = std::min(tightest, r.bound - r.err_inf);
        }
    }
    o.pass = violations == 0 && checked > 0;
    o.detail = std::to_string(checked) + " samples checked, " + std::to_string(violations) + " violations, " +
               std::to_string(failed) + " solver failures, min slack " + fmt("%.3g", tightest);
    return o;
}

// Non-decreasing up to at most one inversion of at most 5% relative size.
bool nearly_monotone(const std::vector<double>& v, std::string& note)
{
    int inversions = 0;
    bool ok = true;
    for (std::size_t k = 1; k < v.size(); ++k) {
        if (v[k] < v[k - 1]) {
            ++inversions;
            const double rel = (v[k - 1] - v[k]) / std::abs(v[k - 1]);
            note += " inv@m" + std::to_string(k + 1) + "=" + fmt("%.1f%%", 100.0 * rel);
            if (rel > 0.05) {
                ok = false;
            }
        }
    }
    return ok && inversions <= 1;
}

Outcome trends(const FullCampaign& fc)
{
    Outcome o;
    auto aggs = [&](std::size_t i) { return fc.results[i].aggregates; };
    const auto a1 = aggs(0);
    const auto a2 = aggs(1);
    const auto a3 = aggs(2);

    const double ms2_m1 = a2.front().max_err_inf;
    const double ms2_m5 = a2.back().max_err_inf;
    const bool part_a = ms2_m1 > 0.3 && ms2_m5 * 3.0 <= ms2_m1;

    double ms1_min = kInf;
    for (const auto& a : a1) {
        ms1_min = std::min(ms1_min, a.max_err_inf);
    }
    const bool part_b = a3.front().max_err_inf < ms1_min;

    bool part_c = true;
    std::string notes;
    for (const auto& res : fc.results) {
        std::vector<double> t;
        std::vector<double> s;
        for (const auto& a : res.aggregates) {
            t.push_back(a.max_t_star);
            s.push_back(a.min_sigma_min);
        }
        std::string nt;
        std::string ns;
        const bool ok = nearly_monotone(t, nt) && nearly_monotone(s, ns);
        part_c = part_c && ok;
        if (!nt.empty() || !ns.empty()) {
            notes += " " + res.system + (nt.empty() ? "" : " t*" + nt) + (ns.empty() ? "" : " sigma" + ns);
        }
    }
    const double anchor = a2.front().min_sigma_min;
    const bool anchor_ok = anchor >= 0.005 && anchor <= 0.05;

    o.pass = part_a && part_b && part_c && anchor_ok;
    std::ostringstream d;
    d << "(a) " << (part_a ? "ok" : "fail") << " ms2 max err m1=" << fmt("%.4f", ms2_m1)
      << " m5=" << fmt("%.4f", ms2_m5) << " ratio " << fmt("%.2f", ms2_m1 / ms2_m5) << "; (b) "
      << (part_b ? "ok" : "fail") << " ms3 m1=" << fmt("%.4f", a3.front().max_err_inf)
      << " vs ms1 min=" << fmt("%.4f", ms1_min) << "; (c) " << (part_c ? "ok" : "fail") << notes
      << "; ms2 m1 min sigma=" << fmt("%.5f", anchor) << (anchor_ok ? " in range" : " out of range");
    o.detail = d.str();
    return o;
}

Outcome grid_oracle()
{
    Outcome o;
    std::mt19937_64 gen(314);
    std::uniform_real_distribution<double> re(1.0, 12.0);
    std::uniform_real_distribution<double> im(0.0, 1.5);
    std::uniform_real_distribution<double> noise(-0.3, 0.3);
    std::uniform_int_distribution<int> md(1, 3);
    double worst_gap = -kInf;
    double worst_consistency = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const int m = md(gen);
        std::vector<PQVectors> pq;
        MeasurementSet meas;
        VectorXd phi(3);
        phi << 0.5, 0.3, 0.2;
        for (int k = 0; k < m; ++k) {
            std::vector<Complex> eps;
            for (int i = 0; i < 3; ++i) {
                eps.emplace_back(re(gen), im(gen));
            }
            pq.push_back(build_pq(contrasts(eps), 1e9 * (k + 1)));
            meas.frequencies_hz.push_back(1e9 * (k + 1));
            meas.eps_hat.push_back(pq.back().ratio(phi) + Complex{noise(gen), noise(gen)});
        }
        const EpigraphLP lp = assemble_multifreq(pq, meas);
        const RecoveryReport r = solve_multifreq(lp);
        if (r.status != LPStatus::Optimal) {
            o.pass = false;
            continue;
        }
        const double grid = mtinv::testing::grid_minimum(lp.a, lp.b, lp.q_max, 200);
        worst_gap = std::max(worst_gap, r.t_star - grid);
        worst_consistency = std::max(
            worst_consistency, std::abs(mtinv::testing::epigraph_value(lp.a, lp.b, lp.q_max, r.phi_star) - r.t_star));
        if (!(r.t_star <= grid + 1e-6)) {
            o.pass = false;
        }
    }
    o.detail = "max (t* - grid) " + fmt("%.3g", worst_gap) + ", max |metric(phi*) - t*| " + fmt("%.2g", worst_consistency);
    return o;
}

Outcome lp_suite()
{
    using mtinv::testing::Expect;
    Outcome o;
    int solved = 0;
    int enumerated = 0;
    std::string bad;
    double worst_res = 0.0;
    double worst_dev = 0.0;
    const auto cases = mtinv::testing::lp_cases();
    for (const auto& tc : cases) {
        const LPSolution sol = solve_lp(tc.problem);
        bool ok = true;
        switch (tc.expect) {
        case Expect::Optimal: {
            ok = sol.status == LPStatus::Optimal && sol.primal_residual <= 1e-8 && sol.dual_residual <= 1e-8;
            worst_res = std::max({worst_res, sol.primal_residual, sol.dual_residual});
            if (ok && tc.objective) {
                ok = std::abs(sol.objective - *tc.objective) <= 1e-7 * (1.0 + std::abs(*tc.objective));
            }
            if (tc.problem.num_variables() <= 8) {
                const auto v = mtinv::testing::vertex_enumeration(tc.problem);
                ++enumerated;
                const double dev = v ? std::abs(v->objective - sol.objective) : kInf;
                worst_dev = std::max(worst_dev, dev);
                ok = ok && v && dev <= 1e-7 * (1.0 + std::abs(v->objective));
            }
            break;
        }
        case Expect::Infeasible:
            ok = sol.status == LPStatus::Infeasible;
            if (tc.problem.num_variables() <= 8) {
                ++enumerated;
                ok = ok && !mtinv::testing::vertex_enumeration(tc.problem);
            }
            break;
        case Expect::Unbounded:
            ok = sol.status == LPStatus::Unbounded;
            break;
        }
        if (ok) {
            ++solved;
        } else {
            bad += " " + tc.name + "[" + std::string(to_string(sol.status)) + "]";
        }
    }
    o.pass = solved == static_cast<int>(cases.size()) && cases.size() == 25;
    o.detail = std::to_string(solved) + "/" + std::to_string(cases.size()) + " correct, " + std::to_string(enumerated) +
               " checked by vertex enumeration (max dev " + fmt("%.2g", worst_dev) + "), max residual " +
               fmt("%.2g", worst_res) + bad;
    return o;
}

Outcome depolarization()
{
    // Quadrature of the depolarization integral (tests/oracles/golden_values.py).
    constexpr double kQ2 = 0.41321800123301788;
    constexpr double kQHalf = 0.23639985871871508;
    Outcome o;
    const bool sphere = depolarization_q({1.0}) == 1.0 / 3.0;
    const double d2 = std::abs(depolarization_q({2.0}) - kQ2);
    const double dh = std::abs(depolarization_q({0.5}) - kQHalf);
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> la(std::log(0.02), std::log(50.0));
    double worst_trace = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double q = depolarization_q({std::exp(la(gen))});
        worst_trace = std::max(worst_trace, std::abs(q + q + (1.0 - 2.0 * q) - 1.0));
    }
    o.pass = sphere && d2 <= 1e-6 && dh <= 1e-6 && worst_trace <= 1e-12;
    o.detail = std::string("Q(1) ") + (sphere ? "exact" : "inexact") + ", |dQ(2)| " + fmt("%.2g", d2) + ", |dQ(0.5)| " +
               fmt("%.2g", dh) + ", max |trace - 1| " + fmt("%.2g", worst_trace);
    return o;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism(const std::string& cli)
{
    Outcome o;
    if (cli.empty()) {
        o.pass = false;
        o.detail = "no CLI path given (--cli)";
        return o;
    }
    const auto dir = std::filesystem::temp_directory_path() / ("mtinv_ac9_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const auto a = dir / "w1.csv";
    const auto b = dir / "w4.csv";
    auto run = [&](int workers, const std::filesystem::path& out) {
        const std::string cmd = "\"" + cli + "\" validate --system ms2 --m 1,3,5 --samples 300 --noise 0.1 --seed 42 --workers " +
                                std::to_string(workers) + " --csv \"" + out.string() + "\" > /dev/null";
        return std::system(cmd.c_str());
    };
    const int rc1 = run(1, a);
    const int rc2 = run(4, b);
    const std::string sa = slurp(a);
    const std::string sb = slurp(b);
    o.pass = rc1 == 0 && rc2 == 0 && !sa.empty() && sa == sb;
    o.detail = std::to_string(sa.size()) + " vs " + std::to_string(sb.size()) + " bytes, " +
               (sa == sb ? "identical" : "different");
    std::filesystem::remove_all(dir);
    return o;
}

} // namespace

int main(int argc, char** argv)
{
    std::string cli;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--cli") {
            cli = argv[i + 1];
        }
    }

    report(1, "zero-noise forward/inverse roundtrip", roundtrip());
    report(2, "two-component closed form", two_component());
    report(3, "ordered simplex vertices and edges", ordered_combinatorics());
    const FullCampaign fc = run_full_campaign();
    report(4, "error bound holds on every sample", bound_validity(fc));
    report(5, "campaign trends", trends(fc));
    report(6, "LP optimum versus simplex grid", grid_oracle());
    report(7, "LP solver suite", lp_suite());
    report(8, "depolarization factors", depolarization());
    report(9, "CSV independent of worker count", determinism(cli));

    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
