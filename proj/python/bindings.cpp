#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "pcnsim/experiment.hpp"
#include "pcnsim/fees.hpp"
#include "pcnsim/network.hpp"
#include "pcnsim/routing.hpp"
#include "pcnsim/sim.hpp"
#include "pcnsim/workload.hpp"

namespace py = pybind11;
using namespace pcnsim;

namespace {

py::dict metrics_to_dict(const RunMetrics& m) {
    py::dict d;
    d["count"] = m.count;
    d["successes"] = m.successes;
    d["routing_failures"] = m.routing_failures;
    d["capacity_failures"] = m.capacity_failures;
    d["success_ratio"] = m.overall_success_ratio;
    d["windowed_success"] = m.windowed_success;
    d["mean_messages"] = m.mean_messages;
    d["mean_messages_success"] = m.mean_messages_success;
    d["mean_fee_success"] = m.mean_fee_success;
    d["initial_capacity"] = m.initial_capacity;
    d["final_capacity"] = m.final_capacity;
    return d;
}

RunConfig make_config(const std::string& fee_policy, const std::string& router, int d, int k,
                      std::size_t nodes, std::size_t attach, double init, double x_tx,
                      std::size_t transactions, const std::string& balance_dist,
                      const std::string& tx_dist, std::uint64_t seed, std::size_t window_size) {
    RunConfig c;
    c.policy = FeePolicy::of_kind(parse_fee_kind(fee_policy));
    c.router = {parse_router_kind(router), d, k};
    c.topology.node_count = nodes;
    c.topology.attach_count = attach;
    c.balances.mean = init;
    c.balances.distribution = parse_distribution(balance_dist);
    c.transactions.count = transactions;
    c.transactions.scale = x_tx;
    c.transactions.distribution = parse_distribution(tx_dist);
    c.seed = seed;
    c.window_size = window_size;
    c.keep_records = false;
    return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Payment channel network simulator with balance-incentive fee policies";

    py::register_exception<InsufficientBalance>(m, "InsufficientBalance");
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::enum_<FeeKind>(m, "FeeKind")
        .value("lightning", FeeKind::lightning)
        .value("distasi", FeeKind::distasi)
        .value("merchant_v1", FeeKind::merchant_v1)
        .value("merchant_v2", FeeKind::merchant_v2);

    py::class_<FeePolicy>(m, "FeePolicy")
        .def(py::init<>())
        .def_readwrite("kind", &FeePolicy::kind)
        .def_readwrite("base_fee", &FeePolicy::base_fee)
        .def_readwrite("rate", &FeePolicy::rate)
        .def_readwrite("rate_low", &FeePolicy::rate_low)
        .def_readwrite("rate_high", &FeePolicy::rate_high)
        .def_readwrite("factor", &FeePolicy::factor)
        .def_static("lightning", &FeePolicy::lightning, py::arg("base") = 1.0, py::arg("rate") = 1e-6)
        .def_static("distasi", &FeePolicy::distasi, py::arg("base") = 1.0, py::arg("r1") = 0.01,
                    py::arg("r2") = 0.03)
        .def_static("merchant_v1", &FeePolicy::merchant_v1, py::arg("factor") = 1.0)
        .def_static("merchant_v2", &FeePolicy::merchant_v2, py::arg("factor") = 1.0);

    py::class_<FeeInput>(m, "FeeInput")
        .def(py::init([](double c_minus, double c_plus, double ref, double x) {
                 return FeeInput{c_minus, c_plus, ref, x};
             }),
             py::arg("c_minus"), py::arg("c_plus"), py::arg("ref"), py::arg("x"))
        .def_readwrite("c_minus", &FeeInput::c_minus)
        .def_readwrite("c_plus", &FeeInput::c_plus)
        .def_readwrite("ref", &FeeInput::ref)
        .def_readwrite("x", &FeeInput::x);

    m.def("in_fee_domain", &in_fee_domain);
    m.def("fee", &fee, "Fee charged for forwarding in.x under the policy");
    m.def("fee_lightning", &fee_lightning);
    m.def("fee_distasi", &fee_distasi);
    m.def("fee_merchant_v1", &fee_merchant_v1);
    m.def("fee_merchant_v2", &fee_merchant_v2);
    m.def(
        "path_fees",
        [](const FeePolicy& policy, const std::vector<std::tuple<double, double, double>>& hops,
           double tx) {
            std::vector<HopState> states;
            for (auto [cm, cp, ref] : hops) states.push_back({cm, cp, ref});
            auto r = path_fees(policy, states, tx);
            return py::make_tuple(r.fees, r.loads, r.total);
        },
        py::arg("policy"), py::arg("hops"), py::arg("tx"),
        "Backward fee recursion; hops are (c_minus, c_plus, ref). Returns (fees, loads, total).");

    py::class_<PaymentNetwork>(m, "PaymentNetwork")
        .def(py::init<std::size_t>(), py::arg("node_count"))
        .def("add_channel", &PaymentNetwork::add_channel, py::arg("u"), py::arg("v"),
             py::arg("balance_uv"), py::arg("balance_vu"), py::arg("reference_uv") = py::none())
        .def_property_readonly("node_count", &PaymentNetwork::node_count)
        .def_property_readonly("channel_count", &PaymentNetwork::channel_count)
        .def("balance", py::overload_cast<NodeId, NodeId>(&PaymentNetwork::balance, py::const_))
        .def("capacity", &PaymentNetwork::capacity)
        .def("reference", &PaymentNetwork::reference)
        .def("apply_transfer", &PaymentNetwork::apply_transfer)
        .def("total_capacity", &PaymentNetwork::total_capacity)
        .def("state_hash", &PaymentNetwork::state_hash);

    m.def(
        "generate_ba",
        [](std::size_t n, std::size_t attach, std::uint64_t seed) {
            std::vector<std::pair<NodeId, NodeId>> out;
            for (const auto& e : generate_ba(n, attach, seed).edges) out.emplace_back(e.u, e.v);
            return out;
        },
        py::arg("node_count"), py::arg("attach_count"), py::arg("seed"));
    m.def(
        "load_snapshot",
        [](const std::filesystem::path& path) {
            auto el = load_snapshot(path);
            std::vector<std::pair<NodeId, NodeId>> edges;
            for (const auto& e : el.edges) edges.emplace_back(e.u, e.v);
            return py::make_tuple(el.node_count, edges, el.warnings());
        },
        py::arg("path"), "Returns (node_count, edges, warnings).");

    m.def("tree_distance", [](const PaymentNetwork& net, NodeId root, NodeId u, NodeId v, std::uint64_t seed) {
        return tree_distance(build_tree(net, root, seed), u, v);
    });

    m.def(
        "run",
        [](const std::string& fee_policy, const std::string& router, int d, int k, std::size_t nodes,
           std::size_t attach, double init, double x_tx, std::size_t transactions,
           const std::string& balance_dist, const std::string& tx_dist, std::uint64_t seed,
           std::size_t window_size) {
            RunConfig c = make_config(fee_policy, router, d, k, nodes, attach, init, x_tx,
                                      transactions, balance_dist, tx_dist, seed, window_size);
            RunMetrics metrics;
            {
                py::gil_scoped_release release;
                metrics = run(c);
            }
            return metrics_to_dict(metrics);
        },
        py::arg("fee_policy") = "merchant_v2", py::arg("router") = "multipath", py::arg("d") = 10,
        py::arg("k") = 2, py::arg("nodes") = 1000, py::arg("attach") = 5, py::arg("init") = 2.4e6,
        py::arg("x_tx") = 0.05, py::arg("transactions") = 20000,
        py::arg("balance_dist") = "exponential", py::arg("tx_dist") = "exponential",
        py::arg("seed") = 1, py::arg("window_size") = 1000,
        "Runs one simulation on a Barabasi-Albert topology and returns its metrics.");

    m.def(
        "run_config",
        [](const std::string& text) {
            std::istringstream in(text);
            auto matrix = parse_config(in);
            std::vector<CellResult> results;
            {
                py::gil_scoped_release release;
                results = run_matrix(matrix);
            }
            py::list rows;
            for (const auto& r : results) {
                py::dict row;
                row["experiment_id"] = r.cell.id;
                row["fee_policy"] = std::string(to_string(r.cell.config.policy.kind));
                row["router"] = std::string(to_string(r.cell.config.router.kind));
                row["d"] = r.cell.config.router.d;
                row["k"] = r.cell.config.router.k;
                row["mean_success"] = r.batch.mean_success;
                row["stddev_success"] = r.batch.stddev_success;
                row["mean_messages"] = r.batch.mean_messages;
                rows.append(row);
            }
            return rows;
        },
        py::arg("config_text"), "Expands and runs an experiment config given as text.");
}
