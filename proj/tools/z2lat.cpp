// z2lat command line front end. Every subcommand reads JSON documents
// (a path, or "-" for stdin) and writes JSON or plain text to stdout.
//
// Exit status: 0 success, 1 domain error (JSON payload on stderr), 2 usage.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>

#include "z2lat/discriminant.hpp"
#include "z2lat/exterior.hpp"
#include "z2lat/hermitian.hpp"
#include "z2lat/isometry.hpp"
#include "z2lat/json_io.hpp"
#include "z2lat/neighbors.hpp"
#include "z2lat/realize.hpp"
#include "z2lat/roots.hpp"

using namespace z2lat;

namespace {

struct Config {
  std::string format = "json";
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> budget;
  long norm = 2;
  std::string input;
  std::string second;
};

struct MalformedJson : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ordered_json read_document(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw MalformedJson("cannot read " + path);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedJson(e.what());
  }
}

/// Any integer matrix: a bare array, a "matrix" field, or a form document.
IntMatrix read_matrix(const ordered_json& j) {
  if (j.is_object() && j.contains("matrix")) return matrix_from_json(j["matrix"]);
  if (j.is_object()) return form_from_json(j).gram();
  return matrix_from_json(j);
}

std::string scalar_text(const ordered_json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

bool is_matrix(const ordered_json& j) {
  if (!j.is_array() || j.empty()) return false;
  for (const auto& row : j) {
    if (!row.is_array()) return false;
    for (const auto& x : row)
      if (x.is_structured()) return false;
  }
  return true;
}

void render_text(const ordered_json& j, std::ostream& out, const std::string& indent) {
  if (is_matrix(j)) {
    for (const auto& row : j) {
      out << indent;
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << scalar_text(row[i]);
      out << '\n';
    }
  } else if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_structured() && !value.empty()) {
        out << indent << key << ":\n";
        render_text(value, out, indent + "  ");
      } else {
        out << indent << key << ": " << (value.is_structured() ? value.dump() : scalar_text(value)) << '\n';
      }
    }
  } else if (j.is_array()) {
    bool flat = true;
    for (const auto& x : j) flat = flat && !x.is_structured();
    if (flat) {
      out << indent;
      for (std::size_t i = 0; i < j.size(); ++i) out << (i ? " " : "") << scalar_text(j[i]);
      out << '\n';
    } else {
      for (std::size_t i = 0; i < j.size(); ++i) {
        out << indent << "- [" << i << "]\n";
        render_text(j[i], out, indent + "  ");
      }
    }
  } else {
    out << indent << scalar_text(j) << '\n';
  }
}

void emit(const ordered_json& j, const Config& cfg) {
  if (cfg.format == "text") {
    render_text(j, std::cout, "");
  } else {
    std::cout << j.dump(2) << '\n';
  }
}

ordered_json run_snf(const Config& cfg) {
  const SmithDecomposition s = smith_normal_form(read_matrix(read_document(cfg.input)));
  return {{"diagonal", vector_to_json(s.diagonal())}, {"U", matrix_to_json(s.U)}, {"V", matrix_to_json(s.V)}};
}

ordered_json run_exterior(const Config& cfg) {
  const SublatticeEmbedding e = exterior_nd_form(form_from_json(read_document(cfg.input)));
  return {{"ambient", form_to_json(e.ambient)},
          {"basis", matrix_to_json(e.basis)},
          {"induced", form_to_json(e.induced)},
          {"index", integer_to_json(e.index())}};
}

ordered_json run_roots(const Config& cfg) {
  return integer_to_json(count_vectors_of_norm(form_from_json(read_document(cfg.input)), cfg.norm));
}

ordered_json run_fingerprint(const Config& cfg) {
  return fingerprint_to_json(fingerprint(form_from_json(read_document(cfg.input))));
}

ordered_json run_neighbors(const Config& cfg) {
  ordered_json out = ordered_json::array();
  for (const Overlattice& o : two_neighbors(form_from_json(read_document(cfg.input))))
    out.push_back({{"gram", matrix_to_json(o.form.gram())},
                   {"parity", to_string(o.parity)},
                   {"label", class_label(o.form)}});
  return out;
}

ordered_json run_linking(const Config& cfg) {
  const SymBilinearForm f = form_from_json(read_document(cfg.input));
  const QuadraticLinkingForm q = boundary_linking_form(f.gram(), quadratic_refinement(f.gram()));
  const FiniteAbelianGroup& g = q.group();
  ordered_json values = ordered_json::array();
  ordered_json pairing = ordered_json::array();
  for (std::size_t i = 0; i < g.rank(); ++i) {
    values.push_back(q.q(g.generator(i)).get_str());
    ordered_json row = ordered_json::array();
    for (std::size_t k = 0; k < g.rank(); ++k) row.push_back(q.b(g.generator(i), g.generator(k)).get_str());
    pairing.push_back(row);
  }
  return {{"group", vector_to_json(g.invariants())},
          {"order", integer_to_json(g.order())},
          {"q", values},
          {"b", pairing}};
}

ordered_json run_pullback(const Config& cfg) {
  const ordered_json doc = read_document(cfg.input);
  require(doc.is_object() && doc.contains("module") && doc.contains("plus") && doc.contains("minus"),
          ErrorKind::InvalidInput, "pullback needs module, plus and minus");
  const LambdaModule m = module_from_json(doc["module"]);
  const IntMatrix beta = doc.contains("beta") ? matrix_from_json(doc["beta"]) : IntMatrix::identity(m.c);
  return hermitian_to_json(pullback(form_from_json(doc["plus"]), form_from_json(doc["minus"]), m, beta));
}

ordered_json run_parts(const Config& cfg) {
  const HermitianForm lambda = hermitian_from_json(read_document(cfg.input));
  const FormParts p = plus_minus_parts(lambda);
  return {{"module", module_to_json(lambda.module())}, {"plus", form_to_json(p.plus)}, {"minus", form_to_json(p.minus)}};
}

ordered_json run_isometry(const Config& cfg) {
  const SymBilinearForm f = form_from_json(read_document(cfg.input));
  const SymBilinearForm g = form_from_json(read_document(cfg.second));
  IsometrySearchOptions opt;
  opt.node_budget = cfg.budget.value_or(0);
  const IsometrySearchResult r = search_isometry_definite(f, g, opt);
  std::string status = r.isometry ? "isometric" : r.budget_exhausted ? "budget-exhausted" : "not-isometric";
  return {{"status", status},
          {"matrix", r.isometry ? matrix_to_json(r.isometry->matrix) : ordered_json(nullptr)},
          {"nodes", r.nodes}};
}

ordered_json run_certify(const Config& cfg) {
  CertifyOptions opt;
  opt.alpha_minus.seed = cfg.seed;
  if (cfg.budget) opt.alpha_minus.budget = *cfg.budget;
  return certify(form_from_json(read_document(cfg.input)), opt);
}

ordered_json run_verify(const Config& cfg) {
  const CertificateCheck r = verify_certificate(read_document(cfg.input));
  return {{"ok", r.ok}, {"failures", r.failures}};
}

void error_payload(const std::string& kind, const std::string& message) {
  std::cerr << ordered_json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact lattice and Z[Z2] form toolkit"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  Config cfg;
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--seed", cfg.seed, "Seed for randomized searches");
  app.add_option("--budget", cfg.budget,
                 "Search budget: isometry nodes (0 = unlimited) or certify hyperbolic planes")
      ->check(CLI::NonNegativeNumber);

  const CLI::Validator readable(
      [](std::string& path) {
        return path == "-" || std::filesystem::is_regular_file(path) ? std::string() : "no such file: " + path;
      },
      "FILE|-");

  using Runner = ordered_json (*)(const Config&);
  std::vector<std::pair<CLI::App*, Runner>> commands;
  auto add = [&](const char* name, const char* help, Runner run) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("input", cfg.input, "JSON document, or - for stdin")->required()->check(readable);
    commands.emplace_back(sub, run);
    return sub;
  };
  add("snf", "Smith normal form of an integer matrix", run_snf);
  add("exterior", "Even-norm sublattice and its Gram matrix", run_exterior);
  add("roots", "Number of vectors of a given norm", run_roots)
      ->add_option("--norm", cfg.norm, "Norm to count")
      ->check(CLI::PositiveNumber);
  add("fingerprint", "Counts of vectors of norm 1, 2, 3 and the minimum", run_fingerprint);
  add("neighbors", "2-neighbours: unimodular overlattices of the even part other than the input", run_neighbors);
  add("linking", "Discriminant group and quadratic linking form of an even form", run_linking);
  add("pullback", "Hermitian form over Z[Z2] from plus and minus parts", run_pullback);
  add("parts", "Plus and minus parts of a hermitian form", run_parts);
  add("isometry", "Isometry between two definite forms", run_isometry)
      ->add_option("target", cfg.second, "Second form")
      ->required()
      ->check(readable);
  add("certify", "Realization certificate for an odd unimodular form", run_certify);
  add("verify", "Re-check a certificate", run_verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    for (const auto& [sub, run] : commands) {
      if (!sub->parsed()) continue;
      const ordered_json out = run(cfg);
      emit(out, cfg);
      if (sub->get_name() == "verify" && !out["ok"].get<bool>()) return 1;
      return 0;
    }
  } catch (const Error& e) {
    error_payload(to_string(e.kind()), e.what());
    return 1;
  } catch (const MalformedJson& e) {
    error_payload("MalformedJson", e.what());
    return 1;
  } catch (const nlohmann::json::exception& e) {
    error_payload("MalformedJson", e.what());
    return 1;
  }
  return 2;
}
