// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "pcnsim/experiment.hpp"
#include "pcnsim/fees.hpp"
#include "pcnsim/routing.hpp"
#include "pcnsim/sim.hpp"

using namespace pcnsim;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
    bool pass = true;
    std::string detail;
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

int worker_count() {
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

const FeeKind kPolicies[] = {FeeKind::lightning, FeeKind::distasi, FeeKind::merchant_v1,
                             FeeKind::merchant_v2};

// ---------------------------------------------------------------------------

Verdict fee_axioms() {
    const auto t0 = Clock::now();
    constexpr double tol = 1e-9;
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t incentive = 0, subadd = 0, lipschitz = 0, negative = 0;
    for (auto policy : {FeePolicy::merchant_v1(1.0), FeePolicy::merchant_v2(1.0)}) {
        for (int i = 0; i < 10'000; ++i) {
            const double cap = std::pow(10.0, 7 * u(rng)) + 1e-3;
            const double cm = u(rng) < 0.05 ? (u(rng) < 0.5 ? 0.0 : cap) : u(rng) * cap;
            const double cp = cap - cm;
            const double ref = u(rng) < 0.05 ? cm : u(rng) * cap;
            const double x1 = u(rng) * cm;
            const double x2 = u(rng) * cm;
            auto f = [&](double a, double b, double x) { return fee(policy, {a, b, ref, x}); };
            const double f1 = f(cm, cp, x1);
            const double f2 = f(cm, cp, x2);
            const double d1 = std::fabs(cm - x1 - ref);
            const double d2 = std::fabs(cm - x2 - ref);

            if (f1 < -tol || f2 < -tol) ++negative;
            // Non-decreasing in the post-payment distance, and a strictly
            // lower fee never comes with a strictly larger distance.
            if (d1 < d2 - tol && f1 > f2 + tol) ++incentive;
            if (f1 < f2 - tol && d1 > d2 + tol) ++incentive;

            const double eps = std::fabs(x2 - x1);
            if (std::fabs(f1 - f2) > policy.factor * eps / cap + tol) ++lipschitz;

            const double a = x1 * u(rng);
            const double b = (cm - a) * u(rng);
            const double whole = f(cm, cp, a + b);
            if (f(cm, cp, a) + f(cm - a, cp + a, b) < whole - tol) ++subadd;
            if (f(cm, cp, b) + f(cm - b, cp + b, a) < whole - tol) ++subadd;
        }
    }
    const double secs = seconds_since(t0);
    Verdict v;
    v.pass = incentive + subadd + lipschitz + negative == 0 && secs < 10;
    v.detail = fmt("2 x 10000 samples; violations incentive=%zu subadditive=%zu lipschitz=%zu "
                   "negative=%zu; %.2fs",
                   incentive, subadd, lipschitz, negative, secs);
    return v;
}

// ---------------------------------------------------------------------------

Verdict fee_recursion() {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> len(1, 6);
    std::size_t mismatches = 0;
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        const FeePolicy policy = FeePolicy::of_kind(kPolicies[i % 4]);
        const int n = len(rng);
        std::vector<HopState> hops;
        for (int j = 0; j < n; ++j) {
            const double cap = 1e3 + u(rng) * 5e6;
            const double cm = u(rng) * cap;
            hops.push_back({cm, cap - cm, u(rng) * cap});
        }
        const double tx = 1.0 + u(rng) * 2e5;
        const auto got = path_fees(policy, hops, tx);
        const auto want = oracle::path_cost(policy, hops, tx);
        auto rel = [](double a, double b) {
            const double scale = std::max(std::fabs(a), std::fabs(b));
            return scale == 0 ? 0.0 : std::fabs(a - b) / scale;
        };
        double err = rel(got.total, want.total);
        for (int j = 0; j < n; ++j) {
            err = std::max(err, rel(got.fees[j], want.fees[j]));
            err = std::max(err, rel(got.loads[j], want.loads[j]));
        }
        worst = std::max(worst, err);
        if (err > 1e-12) ++mismatches;
    }
    return {mismatches == 0, fmt("1000 paths; mismatches=%zu, worst relative error %.3g", mismatches, worst)};
}

// ---------------------------------------------------------------------------

Verdict conservation() {
    const auto t0 = Clock::now();
    std::size_t failures = 0, changed = 0, checked = 0;
    double drift = 0;
    for (auto router : {RouterKind::multipath, RouterKind::cheapest_path}) {
        RunConfig cfg;
        cfg.policy = FeePolicy::merchant_v2();
        cfg.router = {router, 10, 2};
        cfg.transactions.count = 20'000;
        cfg.seed = 3;
        cfg.keep_records = false;
        Simulation sim(cfg);
        const double initial = sim.network().total_capacity();
        while (!sim.done()) {
            const auto before = sim.network().state_hash();
            const auto rec = sim.step();
            if (rec.outcome != Outcome::success) {
                ++failures;
                if (sim.network().state_hash() != before) ++changed;
            }
            if (++checked % 1000 == 0)
                drift = std::max(drift, std::fabs(sim.network().total_capacity() - initial));
        }
        drift = std::max(drift, std::fabs(sim.network().total_capacity() - initial));
    }
    return {drift <= 1e-6 && changed == 0,
            fmt("2 runs x 20000 tx; max capacity drift %.3g; %zu failed payments, %zu changed state; %.1fs",
                drift, failures, changed, seconds_since(t0))};
}

// ---------------------------------------------------------------------------

bool loads_fit(const PaymentNetwork& net, const std::vector<CandidatePath>& paths) {
    std::map<std::pair<NodeId, NodeId>, double> load;
    for (const auto& p : paths)
        for (std::size_t j = 0; j < p.hop_count(); ++j) load[{p.nodes[j], p.nodes[j + 1]}] += p.loads[j];
    for (const auto& [hop, l] : load)
        if (l > net.balance(hop.first, hop.second)) return false;
    return true;
}

Verdict routing_oracle() {
    std::mt19937_64 rng(404);
    std::size_t graphs = 0, cheapest_cases = 0, cheapest_bad = 0, multi_cases = 0, multi_bad = 0;
    for (int g = 0; g < 240; ++g) {
        const std::size_t n = 2 + static_cast<std::size_t>(g % 5);
        auto net = oracle::random_connected(rng, n, 20, 400);
        ++graphs;
        std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n - 1));
        std::uniform_real_distribution<double> value(5, 500);
        const auto trees = build_trees(net, 4, static_cast<std::uint64_t>(g));
        for (int q = 0; q < 4; ++q) {
            const NodeId s = node(rng);
            NodeId t = node(rng);
            if (s == t) t = (t + 1) % n;
            const double tx = value(rng);
            for (auto kind : kPolicies) {
                const auto policy = FeePolicy::of_kind(kind);
                ++cheapest_cases;
                const auto plan = route_cheapest_path(net, policy, s, t, tx);
                const auto best = oracle::cheapest_simple_path(net, policy, s, t, tx);
                if (plan.ok() != best.has_value()) {
                    ++cheapest_bad;
                } else if (best) {
                    const double got = plan.source_outflow();
                    if (std::fabs(got - best->outflow) > 1e-12 * best->outflow) ++cheapest_bad;
                }

                // Candidate set rebuilt from individual probes.
                const int k = 2;
                std::vector<CandidatePath> cands;
                for (const auto& tree : trees) {
                    auto probe = route_tree(net, tree, policy, s, t, tx / k);
                    if (probe.path) cands.push_back(*probe.path);
                }
                const auto mp = route_multipath(net, trees, policy, s, t, tx, 4, k);
                ++multi_cases;
                if (cands.size() < static_cast<std::size_t>(k)) {
                    if (mp.status != RouteStatus::too_few_paths) ++multi_bad;
                    continue;
                }
                double best_pair = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < cands.size(); ++i)
                    for (std::size_t j = i + 1; j < cands.size(); ++j)
                        best_pair = std::min(best_pair, cands[i].path_fee + cands[j].path_fee);
                const auto chosen = select_cheapest(cands, k);
                double chosen_fee = 0;
                for (const auto& c : chosen) chosen_fee += c.path_fee;
                if (mp.candidates_found != static_cast<int>(cands.size())) ++multi_bad;
                else if (std::fabs(chosen_fee - best_pair) > 1e-12 * std::max(1.0, best_pair)) ++multi_bad;
                else if (mp.ok() != loads_fit(net, chosen)) ++multi_bad;
                else if (mp.ok() && std::fabs(mp.total_fee - best_pair) > 1e-12 * std::max(1.0, best_pair))
                    ++multi_bad;
            }
        }
    }
    return {graphs >= 200 && cheapest_bad == 0 && multi_bad == 0,
            fmt("%zu graphs (2-6 nodes); cheapest path %zu/%zu match; multipath %zu/%zu minimal",
                graphs, cheapest_cases - cheapest_bad, cheapest_cases, multi_cases - multi_bad, multi_cases)};
}

// ---------------------------------------------------------------------------

// Desk-scale grid shared by the reproduction criteria.
struct DeskGrid {
    std::map<std::pair<FeeKind, int>, BatchResult> multipath;  // (policy, k) at d = 10
    std::map<FeeKind, BatchResult> cheapest;
    double seconds = 0;
};

RunConfig desk_config(FeeKind kind, RouterKind router, int d, int k, std::size_t count) {
    RunConfig c;
    c.policy = FeePolicy::of_kind(kind);
    c.router = {router, d, k};
    c.topology.node_count = 1000;
    c.topology.attach_count = 5;
    c.balances.mean = 2'400'000;
    c.transactions.scale = 0.05;
    c.transactions.count = count;
    c.seed = 1;
    c.keep_records = false;
    return c;
}

DeskGrid run_desk_grid() {
    const auto t0 = Clock::now();
    std::vector<RunConfig> cfgs;
    for (int k = 1; k <= 10; ++k)
        for (auto kind : kPolicies) cfgs.push_back(desk_config(kind, RouterKind::multipath, 10, k, 20'000));
    const auto batches = run_batch(cfgs, 5, worker_count());
    DeskGrid g;
    for (std::size_t i = 0; i < cfgs.size(); ++i)
        g.multipath[{cfgs[i].policy.kind, cfgs[i].router.k}] = batches[i];
    g.seconds = seconds_since(t0);
    return g;
}

Verdict directional(const DeskGrid& g) {
    constexpr double close = 0.02;  // tolerance for "approximately equal"
    auto s = [&](FeeKind kind, int k) { return g.multipath.at({kind, k}).mean_success; };
    std::string detail;
    bool pass = g.seconds <= 600;
    for (int k : {2, 3, 5}) {
        const double ln = s(FeeKind::lightning, k), ds = s(FeeKind::distasi, k),
                     v1 = s(FeeKind::merchant_v1, k), v2 = s(FeeKind::merchant_v2, k);
        const bool ok = v2 >= v1 && v2 >= ds && std::fabs(v1 - ds) <= close && std::min(v1, ds) >= ln &&
                        v2 - ln >= 0.03;
        pass = pass && ok;
        detail += fmt("k=%d ln=%.4f ds=%.4f v1=%.4f v2=%.4f%s; ", k, ln, ds, v1, v2, ok ? "" : " (order broken)");
    }
    std::size_t redundancy_bad = 0;
    for (auto kind : kPolicies)
        for (int k = 1; k < 10; ++k)
            if (s(kind, k) < s(kind, 10)) ++redundancy_bad;
    pass = pass && redundancy_bad == 0;
    detail += fmt("k<d below k=d: %zu; grid %.0fs", redundancy_bad, g.seconds);
    return {pass, detail};
}

Verdict depletion() {
    std::vector<RunConfig> cfgs;
    for (auto kind : kPolicies) cfgs.push_back(desk_config(kind, RouterKind::multipath, 10, 2, 100'000));
    const auto batches = run_batch(cfgs, 1, worker_count());
    bool pass = true;
    std::string detail;
    std::map<FeeKind, double> last;
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
        const auto& w = batches[i].windowed_mean;
        double first = 0, final10 = 0;
        for (std::size_t j = 0; j < 10; ++j) {
            first += w[j] / 10;
            final10 += w[w.size() - 10 + j] / 10;
        }
        last[cfgs[i].policy.kind] = w.back();
        pass = pass && final10 < first;
        detail += fmt("%s first10=%.4f last10=%.4f; ", std::string(to_string(cfgs[i].policy.kind)).c_str(),
                      first, final10);
    }
    const double gap = last[FeeKind::merchant_v2] - last[FeeKind::lightning];
    pass = pass && gap >= 0.05;
    detail += fmt("final window v2-ln=%.2fpp", 100 * gap);
    return {pass, detail};
}

Verdict source_routing(DeskGrid& g) {
    std::vector<RunConfig> cfgs;
    for (auto kind : kPolicies) cfgs.push_back(desk_config(kind, RouterKind::cheapest_path, 1, 1, 20'000));
    const auto batches = run_batch(cfgs, 5, worker_count());
    bool pass = true;
    std::string detail;
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
        const auto kind = cfgs[i].policy.kind;
        g.cheapest[kind] = batches[i];
        double best = 0;
        for (int k = 1; k <= 5; ++k) best = std::max(best, g.multipath.at({kind, k}).mean_success);
        pass = pass && batches[i].mean_success < best;
        detail += fmt("%s cheapest=%.4f best multipath=%.4f; ", std::string(to_string(kind)).c_str(),
                      batches[i].mean_success, best);
    }
    return {pass, detail};
}

Verdict overhead(const DeskGrid& g) {
    std::vector<RunConfig> cfgs;
    for (int d : {2, 5})
        for (int k : {1, 2})
            for (auto kind : kPolicies) cfgs.push_back(desk_config(kind, RouterKind::multipath, d, k, 20'000));
    const auto batches = run_batch(cfgs, 5, worker_count());
    std::map<std::tuple<int, int, FeeKind>, double> msgs;
    for (std::size_t i = 0; i < cfgs.size(); ++i)
        msgs[{cfgs[i].router.d, cfgs[i].router.k, cfgs[i].policy.kind}] = batches[i].mean_messages;
    for (const auto& [key, b] : g.multipath) msgs[{10, key.second, key.first}] = b.mean_messages;

    std::size_t not_increasing = 0;
    for (int k : {1, 2})
        for (auto kind : kPolicies)
            if (!(msgs[{2, k, kind}] < msgs[{5, k, kind}] && msgs[{5, k, kind}] < msgs[{10, k, kind}]))
                ++not_increasing;

    double worst_spread = 0;
    std::map<std::pair<int, int>, std::pair<double, double>> range;
    for (const auto& [key, m] : msgs) {
        auto dk = std::pair{std::get<0>(key), std::get<1>(key)};
        auto it = range.find(dk);
        if (it == range.end()) range[dk] = {m, m};
        else it->second = {std::min(it->second.first, m), std::max(it->second.second, m)};
    }
    for (const auto& [dk, r] : range) worst_spread = std::max(worst_spread, (r.second - r.first) / r.first);

    auto show = [&](int d) { return msgs[{d, 2, FeeKind::lightning}]; };
    return {not_increasing == 0 && worst_spread < 0.10,
            fmt("lightning k=2 messages d=2:%.2f d=5:%.2f d=10:%.2f; non-increasing series %zu; "
                "largest policy spread %.1f%% over %zu (d,k) cells",
                show(2), show(5), show(10), not_increasing, 100 * worst_spread, range.size())};
}

}  // namespace

int main(int argc, char** argv) {
    // Optional arguments select criteria by number; default is all of them.
    std::vector<bool> wanted(9, argc == 1);
    for (int i = 1; i < argc; ++i) {
        const int id = std::atoi(argv[i]);
        if (id < 1 || id > 8) {
            std::fprintf(stderr, "usage: %s [criterion 1-8]...\n", argv[0]);
            return 2;
        }
        wanted[id] = true;
    }

    int failed = 0;
    int ran = 0;
    auto report = [&](int id, const char* name, const Verdict& v) {
        std::printf("[%s] %d %s: %s\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.c_str());
        std::fflush(stdout);
        ++ran;
        if (!v.pass) ++failed;
    };
    auto guarded = [&](int id, const char* name, const std::function<Verdict()>& fn) {
        if (!wanted[id]) return;
        try {
            report(id, name, fn());
        } catch (const std::exception& e) {
            report(id, name, {false, std::string("exception: ") + e.what()});
        }
    };

    guarded(1, "fee axioms", fee_axioms);
    guarded(2, "fee recursion oracle", fee_recursion);
    guarded(3, "conservation and atomicity", conservation);
    guarded(4, "routing oracle", routing_oracle);

    DeskGrid grid;
    std::string grid_error;
    if (wanted[5] || wanted[7] || wanted[8]) {
        try {
            grid = run_desk_grid();
        } catch (const std::exception& e) {
            grid_error = e.what();
        }
    }
    auto with_grid = [&](std::function<Verdict()> fn) {
        return [fn, &grid_error]() -> Verdict {
            if (!grid_error.empty()) return {false, "desk grid failed: " + grid_error};
            return fn();
        };
    };
    guarded(5, "success ordering across fee policies", with_grid([&] { return directional(grid); }));
    guarded(6, "depletion over time", depletion);
    guarded(7, "source routing below multipath", with_grid([&] { return source_routing(grid); }));
    guarded(8, "message overhead", with_grid([&] { return overhead(grid); }));

    std::printf("%d of %d criteria failed\n", failed, ran);
    return failed ? 1 : 0;
}
