#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "immerse/expansion.hpp"
#include "immerse/extremal.hpp"
#include "immerse/generators.hpp"
#include "immerse/graph.hpp"
#include "immerse/immersion.hpp"
#include "immerse/workbench.hpp"

namespace py = pybind11;
using namespace immerse;

namespace {

using EdgeTuple = std::pair<Vertex, Vertex>;

Graph make_graph(std::size_t n, const std::vector<EdgeTuple>& edges) {
    std::vector<Edge> es;
    es.reserve(edges.size());
    for (auto [u, v] : edges) es.emplace_back(u, v);
    return Graph(n, es);
}

std::vector<EdgeTuple> edge_tuples(std::span<const Edge> es) {
    std::vector<EdgeTuple> out;
    for (const Edge& e : es) out.emplace_back(e.u, e.v);
    return out;
}

double number(const py::object& x) {
    if (py::isinstance<py::str>(x)) return to_double(parse_rational(x.cast<std::string>()));
    return x.cast<double>();
}

Rational rational(const py::object& x) {
    if (py::isinstance<py::str>(x)) return parse_rational(x.cast<std::string>());
    return parse_rational(py::str(x).cast<std::string>());
}

EmbedConfig make_config(const std::string& mode, const py::object& eps1, const py::object& eps2,
                        const py::object& eta, int s, int t, std::uint64_t seed, bool gated_only) {
    EmbedConfig cfg;
    cfg.mode = parse_mode(mode);
    cfg.eps1 = number(eps1);
    cfg.eps2 = number(eps2);
    cfg.eta = rational(eta);
    cfg.s = s;
    cfg.t = t;
    cfg.seed = seed;
    cfg.gated_only = gated_only;
    return cfg;
}

py::dict verdict_dict(const ExpansionVerdict& v) {
    py::dict d;
    d["status"] = to_string(v.status);
    d["samples_tried"] = v.samples_tried;
    if (v.witness) {
        d["witness_x"] = v.witness->x;
        d["witness_f"] = edge_tuples(v.witness->f);
    } else {
        d["witness_x"] = py::none();
        d["witness_f"] = py::none();
    }
    return d;
}

}  // namespace

PYBIND11_MODULE(_immerse, m) {
    m.doc() = "Clique immersions via robust sublinear expanders";

    py::register_exception<GraphError>(m, "GraphError", PyExc_ValueError);

    py::class_<Graph>(m, "Graph")
        .def(py::init(&make_graph), py::arg("n"), py::arg("edges"))
        .def_property_readonly("n", &Graph::n)
        .def_property_readonly("m", &Graph::m)
        .def("edges", [](const Graph& g) { return edge_tuples(g.edges()); })
        .def("degree", &Graph::degree)
        .def("has_edge", &Graph::has_edge)
        .def("avg_degree", [](const Graph& g) { return to_double(avg_degree(g)); })
        .def("fingerprint", &Graph::fingerprint)
        .def("to_edge_list", [](const Graph& g) {
            std::ostringstream os;
            write_edge_list(os, g);
            return os.str();
        })
        .def_static("from_edge_list", [](const std::string& text) {
            std::istringstream is(text);
            return read_edge_list(is);
        })
        .def("__repr__", [](const Graph& g) {
            return "<Graph n=" + std::to_string(g.n()) + " m=" + std::to_string(g.m()) + ">";
        });

    py::class_<Immersion>(m, "Immersion")
        .def_property_readonly("order", &Immersion::order)
        .def_readonly("branch", &Immersion::branch)
        .def_readonly("host_id", &Immersion::host_id)
        .def_property_readonly("paths", [](const Immersion& imm) { return imm.paths; })
        .def("path_between", &Immersion::path_between)
        .def("to_certificate", [](const Immersion& imm) {
            std::ostringstream os;
            write_certificate(os, imm);
            return os.str();
        })
        .def_static("from_certificate", [](const std::string& text) {
            std::istringstream is(text);
            return read_certificate(is);
        })
        .def("__repr__", [](const Immersion& imm) { return "<Immersion order=" + std::to_string(imm.order()) + ">"; });

    m.def("generate", [](const std::string& spec, std::uint64_t seed) { return generate(parse_gen_spec(spec, seed)); },
          py::arg("spec"), py::arg("seed") = 0);
    m.def("describe", [](const std::string& spec, std::uint64_t seed) { return parse_gen_spec(spec, seed).describe(); },
          py::arg("spec"), py::arg("seed") = 0);
    m.def("corpus", [](const std::string& profile, std::uint64_t seed) {
              std::vector<std::pair<std::string, Graph>> out;
              for (const auto& spec : corpus(profile, seed)) out.emplace_back(spec.describe(), generate(spec));
              return out;
          },
          py::arg("profile"), py::arg("seed") = 0);

    m.def("verify", [](const Graph& g, const Immersion& imm, bool strong) {
              const auto rep = verify_immersion(g, imm, strong);
              std::vector<std::pair<std::string, std::string>> vs;
              for (const auto& v : rep.violations) vs.emplace_back(to_string(v.kind), v.locus);
              py::dict d;
              d["ok"] = rep.ok;
              d["violations"] = vs;
              return d;
          },
          py::arg("graph"), py::arg("immersion"), py::arg("strong") = false);

    m.def("greedy_baseline", &greedy_baseline, py::arg("graph"));

    m.def("oracle", [](const Graph& g, int cap, std::uint64_t budget) {
              OracleResult r;
              {
                  py::gil_scoped_release release;
                  r = oracle_max_immersion(g, cap, budget);
              }
              py::dict d;
              d["max_order"] = r.max_order;
              d["exact"] = r.exact;
              d["nodes"] = r.nodes;
              d["certificate"] = r.certificate;
              return d;
          },
          py::arg("graph"), py::arg("cap") = -1, py::arg("node_budget") = 50'000'000);

    m.def("embed", [](const Graph& g, const std::string& mode, const py::object& eps1, const py::object& eps2,
                      const py::object& eta, int s, int t, std::uint64_t seed, bool gated_only) {
              const EmbedConfig cfg = make_config(mode, eps1, eps2, eta, s, t, seed, gated_only);
              cfg.validate();
              std::pair<Immersion, EmbedReport> res;
              {
                  py::gil_scoped_release release;
                  res = embed_clique_immersion(g, cfg);
              }
              const auto& rep = res.second;
              py::dict d;
              d["route"] = rep.route;
              d["paper_case"] = rep.paper_case;
              d["achieved"] = rep.achieved;
              d["baseline_order"] = rep.baseline_order;
              d["d"] = to_double(rep.d);
              d["target"] = rep.target;
              d["expander_n"] = rep.expander_n;
              d["expander_m"] = rep.expander_m;
              d["extract_status"] = rep.extract_status;
              d["expander_verdict"] = rep.expander_verdict;
              d["dense_gate"] = rep.dense_gate;
              d["z1_size"] = rep.z1_size;
              d["d_prime"] = to_double(rep.d_prime);
              d["d_prime_ok"] = rep.d_prime_ok;
              d["audits_ok"] = rep.audits_ok;
              d["budget_exceeded"] = rep.budget_exceeded;
              d["candidates"] = rep.candidates;
              d["header"] = rep.header(cfg);
              return py::make_tuple(res.first, d);
          },
          py::arg("graph"), py::arg("mode") = "practical", py::arg("eps1") = py::str("1/400"),
          py::arg("eps2") = py::str("1/100"), py::arg("eta") = py::str("1/10"), py::arg("s") = 2, py::arg("t") = 2,
          py::arg("seed") = 0, py::arg("gated_only") = false);

    m.def("find_kst", [](const Graph& g, int s, int t) -> py::object {
              const auto w = find_kst(g, s, t);
              if (!w) return py::none();
              return py::make_tuple(w->left, w->right);
          },
          py::arg("graph"), py::arg("s") = 2, py::arg("t") = 2);

    m.def("rho", [](double x, const py::object& eps1, double k) { return rho(x, RhoParams{number(eps1), k}); },
          py::arg("x"), py::arg("eps1"), py::arg("k"));

    m.def("adversarial_neighborhood", [](const Graph& g, const std::vector<Vertex>& x, std::int64_t budget) {
              const auto r = adversarial_neighborhood(g, x, budget);
              return py::make_tuple(r.min_size, edge_tuples(r.witness));
          },
          py::arg("graph"), py::arg("x"), py::arg("budget"));

    m.def("certify", [](const Graph& g, const py::object& eps1, const py::object& eps2, bool exhaustive,
                        std::uint64_t seed, std::size_t trials) {
              const auto mode = exhaustive ? CertifyMode::exhaustive() : CertifyMode::sampled(seed, trials);
              ExpansionVerdict v;
              {
                  py::gil_scoped_release release;
                  v = certify_robust_expansion(g, number(eps1), number(eps2), mode);
              }
              return verdict_dict(v);
          },
          py::arg("graph"), py::arg("eps1") = py::str("1/400"), py::arg("eps2") = py::str("1/100"),
          py::arg("exhaustive") = true, py::arg("seed") = 0, py::arg("trials") = 200);

    m.def("extract", [](const Graph& g, const py::object& eps1, const py::object& eps2, int max_rounds,
                        std::uint64_t seed) {
              ExtractOptions opts;
              opts.max_rounds = max_rounds;
              opts.seed = seed;
              const auto r = extract_robust_expander(g, number(eps1), number(eps2), opts);
              py::dict d;
              d["graph"] = r.graph;
              d["to_parent"] = r.to_parent;
              d["status"] = to_string(r.status);
              d["rounds"] = r.rounds;
              d["verdict"] = verdict_dict(r.verdict);
              return d;
          },
          py::arg("graph"), py::arg("eps1") = py::str("1/400"), py::arg("eps2") = py::str("1/100"),
          py::arg("max_rounds") = 64, py::arg("seed") = 0);

    m.def("run_benchmark", [](const std::string& profile, const std::string& mode, int workers, bool timing,
                              std::uint64_t seed) {
              EmbedConfig cfg;
              cfg.mode = parse_mode(mode);
              cfg.seed = seed;
              py::gil_scoped_release release;
              return run_benchmark(profile, cfg, BenchOptions{workers, timing, 7});
          },
          py::arg("profile"), py::arg("mode") = "practical", py::arg("workers") = 1, py::arg("timing") = false,
          py::arg("seed") = 0);
}
