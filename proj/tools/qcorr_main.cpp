#include "qcorr/serialize.hpp"
#include "qcorr/sync.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

namespace {

using qcorr::Json;

// Gamma is a bijection exactly when its smallest singular value is bounded
// away from zero; the clean value is 1/sqrt(n), so anything above this
// floor certifies full rank.
constexpr double kGammaFloor = 1e-6;

struct JobSpec {
  std::string command;
  std::vector<std::string> inputs;
  double tol = qcorr::kDefaultTol;
  std::uint64_t seed = 0;
  std::string out;  // empty writes to standard output
  bool table = false;
};

std::string render_table(const Json& report) {
  std::size_t width = 0;
  for (auto it = report.begin(); it != report.end(); ++it) {
    width = std::max(width, it.key().size());
  }
  std::string text;
  for (auto it = report.begin(); it != report.end(); ++it) {
    const std::string value =
        it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
    text += it.key();
    text.append(width + 2 - it.key().size(), ' ');
    text += value;
    text += '\n';
  }
  return text;
}

void emit(const JobSpec& job, const Json& doc) {
  const std::string text = job.table ? render_table(doc) : qcorr::dump_json(doc);
  if (job.out.empty()) {
    std::cout << text;
  } else {
    qcorr::write_text_file(job.out, text);
  }
}

int run_validate_family(const JobSpec& job) {
  const qcorr::QuantumFamily F = qcorr::family_from_json(qcorr::load_json_file(job.inputs[0]));
  const qcorr::FamilyReport rep = qcorr::validate_family(F, job.tol);
  Json doc = Json::object();
  doc["pass"] = rep.pass;
  doc["adjoint_residual"] = rep.adjoint_residual;
  doc["adjoint_worst"] = rep.adjoint_worst;
  doc["product_residual"] = rep.product_residual;
  doc["product_worst_pair"] = rep.worst_pair;
  doc["product_worst_block"] = rep.worst_block;
  doc["reads_residual"] = rep.reads_residual;
  doc["unitality_residual"] = rep.unitality_residual;
  doc["block_sum_residual"] = rep.block_sum_residual;
  doc["tol"] = rep.tol;
  emit(job, doc);
  return rep.pass ? 0 : 1;
}

int run_validate_povm(const JobSpec& job) {
  const qcorr::QuantumFamily F = qcorr::family_from_json(qcorr::load_json_file(job.inputs[0]));
  const qcorr::UcpReport rep = qcorr::validate_povm(F, job.tol);
  Json doc = Json::object();
  doc["pass"] = rep.pass;
  doc["min_choi_eigenvalue"] = rep.min_choi_eigenvalue;
  doc["unitality_defect"] = rep.unitality_defect;
  doc["tol"] = rep.tol;
  emit(job, doc);
  return rep.pass ? 0 : 1;
}

int run_build_correlation(const JobSpec& job) {
  const qcorr::Realization R = qcorr::realization_from_json(qcorr::load_json_file(job.inputs[0]));
  const qcorr::CorrelationTensor T = qcorr::correlation_from_realization(R, job.tol);
  emit(job, qcorr::to_json(T));
  return 0;
}

int run_check_correlation(const JobSpec& job) {
  const qcorr::CorrelationTensor T =
      qcorr::correlation_from_json(qcorr::load_json_file(job.inputs[0]));
  const qcorr::UcpReport ucp = qcorr::is_ucp(T.to_map(), job.tol);
  const qcorr::NonsignallingReport ns = qcorr::is_nonsignalling(T, job.tol);
  const qcorr::Complex esv = qcorr::entangled_sync_value(T);
  Json doc = Json::object();
  doc["pass"] = ucp.pass && ns.pass;
  doc["ucp_pass"] = ucp.pass;
  doc["min_choi_eigenvalue"] = ucp.min_choi_eigenvalue;
  doc["unitality_defect"] = ucp.unitality_defect;
  doc["nonsignalling_pass"] = ns.pass;
  doc["nonsignalling_residual"] = ns.residual;
  doc["hermiticity_residual"] = qcorr::hermiticity_residual(T);
  doc["sync_sum"] = qcorr::sync_sum(T);
  doc["sync_sum_per_block"] = qcorr::sync_sum_per_block(T);
  doc["sync_imag_defect"] = qcorr::sync_imag_defect(T);
  doc["sync_defect"] = qcorr::sync_defect(T);
  doc["synchronous"] = qcorr::is_synchronous(T, job.tol);
  doc["entangled_sync_value"] = Json::array({esv.real(), esv.imag()});
  doc["tol"] = job.tol;
  emit(job, doc);
  return (ucp.pass && ns.pass) ? 0 : 1;
}

int run_from_trace(const JobSpec& job) {
  const qcorr::QuantumFamily F = qcorr::family_from_json(qcorr::load_json_file(job.inputs[0]));
  qcorr::CorrelationTensor T(F.question_space(), F.answer_space());
  if (job.inputs.size() > 1) {
    const Json sj = qcorr::load_json_file(job.inputs[1]);
    if (!sj.is_object() || !sj.contains("density")) {
      throw qcorr::ShapeError("$: expected an object with a \"density\" matrix");
    }
    const qcorr::Matrix tau = qcorr::matrix_from_json(sj["density"], "$.density");
    T = qcorr::correlation_from_trace(F, tau, job.tol);
  } else {
    T = qcorr::correlation_from_trace(F, job.tol);
  }
  emit(job, qcorr::to_json(T));
  return 0;
}

int run_gns_realize(const JobSpec& job) {
  const qcorr::QuantumFamily F = qcorr::family_from_json(qcorr::load_json_file(job.inputs[0]));
  const qcorr::Realization R = qcorr::gns_realization_from_trace(F, job.tol);
  emit(job, qcorr::to_json(R));
  return 0;
}

int run_analyze_sync(const JobSpec& job) {
  const qcorr::Realization R = qcorr::realization_from_json(qcorr::load_json_file(job.inputs[0]));
  const qcorr::SyncReport rep = qcorr::analyze_synchronous_realization(R, job.tol);
  const bool pass = rep.synchronous && rep.vector_state_transfer && rep.u_algebra_tracial &&
                    rep.w_algebra_tracial && rep.reconstruction_ok;
  Json doc = Json::object();
  doc["pass"] = pass;
  doc["sync_defect"] = rep.sync_defect;
  doc["synchronous"] = rep.synchronous;
  doc["checks_run"] = rep.checks_run;
  doc["wu_residual"] = rep.wu_residual;
  doc["u_traciality_residual"] = rep.u_traciality_residual;
  doc["w_traciality_residual"] = rep.w_traciality_residual;
  doc["traciality_residual"] = rep.traciality_residual;
  doc["reconstruction_residual"] = rep.reconstruction_residual;
  doc["vector_state_transfer"] = rep.vector_state_transfer;
  doc["u_algebra_tracial"] = rep.u_algebra_tracial;
  doc["w_algebra_tracial"] = rep.w_algebra_tracial;
  doc["reconstruction_ok"] = rep.reconstruction_ok;
  doc["tol"] = rep.tol;
  emit(job, doc);
  return pass ? 0 : 1;
}

int run_pisier(const JobSpec& job) {
  const qcorr::BlockLinearMap m = qcorr::map_from_json(qcorr::load_json_file(job.inputs[0]));
  const qcorr::PisierDecomposition dec = qcorr::pisier_decompose(m, job.tol);
  const bool pass = dec.dimension_identity && dec.gamma_min_singular > kGammaFloor &&
                    dec.multiplicativity_residual <= job.tol;
  Json doc = Json::object();
  doc["pass"] = pass;
  doc["n"] = dec.n;
  doc["commutant_dim"] = dec.commutant_dim;
  doc["dimension_identity"] = dec.dimension_identity;
  doc["gamma_min_singular"] = dec.gamma_min_singular;
  doc["multiplicativity_residual"] = dec.multiplicativity_residual;
  doc["tol"] = dec.tol;
  emit(job, doc);
  return pass ? 0 : 1;
}

int run_random_family(const JobSpec& job) {
  const Json j = qcorr::load_json_file(job.inputs[0]);
  if (!j.is_object() || !j.contains("P") || !j.contains("O") || !j.contains("d")) {
    throw qcorr::ShapeError("$: expected an object with fields \"P\", \"O\", \"d\"");
  }
  const qcorr::QuantumSpace P = qcorr::space_from_json(j["P"], "$.P");
  const qcorr::QuantumSpace O = qcorr::space_from_json(j["O"], "$.O");
  if (!j["d"].is_number_integer() && !j["d"].is_number_unsigned()) {
    throw qcorr::ShapeError("$.d: expected an integer");
  }
  const qcorr::QuantumFamily F = qcorr::random_family(P, O, j["d"].get<int>(), job.seed);
  emit(job, qcorr::to_json(F));
  return 0;
}

int run_classical_table(const JobSpec& job) {
  const qcorr::CorrelationTensor T =
      qcorr::correlation_from_json(qcorr::load_json_file(job.inputs[0]));
  const qcorr::ClassicalTable table = qcorr::classical_table(T, job.tol);
  const bool pass = table.negativity <= job.tol && table.imag_defect <= job.tol &&
                    table.normalization_defect <= job.tol && table.marginal_dependence <= job.tol;

  const bool csv_out =
      job.out.size() >= 4 && job.out.compare(job.out.size() - 4, 4, ".csv") == 0;
  if (csv_out) {
    qcorr::write_text_file(job.out, qcorr::classical_table_csv(table));
  }

  Json doc = Json::object();
  doc["pass"] = pass;
  doc["n_answers"] = table.n_answers;
  doc["n_questions"] = table.n_questions;
  doc["negativity"] = table.negativity;
  doc["imag_defect"] = table.imag_defect;
  doc["normalization_defect"] = table.normalization_defect;
  doc["marginal_dependence"] = table.marginal_dependence;
  doc["tol"] = job.tol;
  if (!csv_out) {
    Json pk = Json::array();
    for (int k = 0; k < table.n_answers; ++k) {
      Json pkp = Json::array();
      for (int kp = 0; kp < table.n_answers; ++kp) {
        Json pl = Json::array();
        for (int l = 0; l < table.n_questions; ++l) {
          Json plp = Json::array();
          for (int lp = 0; lp < table.n_questions; ++lp) plp.push_back(table.at(k, kp, l, lp));
          pl.push_back(std::move(plp));
        }
        pkp.push_back(std::move(pl));
      }
      pk.push_back(std::move(pkp));
    }
    doc["p"] = std::move(pk);
  }
  if (csv_out) {
    // Report goes to standard output, the table itself went to the file.
    std::cout << (job.table ? render_table(doc) : qcorr::dump_json(doc));
  } else {
    emit(job, doc);
  }
  return pass ? 0 : 1;
}

int run(const JobSpec& job) {
  if (job.command == "validate-family") return run_validate_family(job);
  if (job.command == "validate-povm") return run_validate_povm(job);
  if (job.command == "build-correlation") return run_build_correlation(job);
  if (job.command == "check-correlation") return run_check_correlation(job);
  if (job.command == "from-trace") return run_from_trace(job);
  if (job.command == "gns-realize") return run_gns_realize(job);
  if (job.command == "analyze-sync") return run_analyze_sync(job);
  if (job.command == "pisier") return run_pisier(job);
  if (job.command == "random-family") return run_random_family(job);
  if (job.command == "classical-table") return run_classical_table(job);
  std::cerr << "error: unknown command " << job.command << "\n";
  return 2;
}

struct CommandInfo {
  const char* name;
  const char* help;
  int min_inputs;
  int max_inputs;
  bool has_seed;
};

constexpr CommandInfo kCommands[] = {
    {"validate-family", "check the homomorphism-level generator relations of a family", 1, 1,
     false},
    {"validate-povm", "check unitality and complete positivity of a family's induced map", 1, 1,
     false},
    {"build-correlation", "construct the correlation tensor of a realization", 1, 1, false},
    {"check-correlation", "run every verdict on a correlation tensor", 1, 1, false},
    {"from-trace", "build the trace-induced correlation of a family, optional density input", 1,
     2, false},
    {"gns-realize", "vectorization realization of a family's trace correlation", 1, 1, false},
    {"analyze-sync", "verify the structure a synchronous realization must carry", 1, 1, false},
    {"pisier", "split a space along an embedded matrix algebra and its commutant", 1, 1, false},
    {"random-family", "seeded random family for {\"P\":…,\"O\":…,\"d\":…}", 1, 1, true},
    {"classical-table", "probability table of a correlation over classical spaces", 1, 1, false},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toolkit for quantum families of maps and their correlations"};
  app.require_subcommand(1);
  JobSpec job;

  for (const CommandInfo& info : kCommands) {
    CLI::App* cmd = app.add_subcommand(info.name, info.help);
    cmd->callback([&job, name = info.name] { job.command = name; });
    cmd->add_option("inputs", job.inputs, "input JSON documents")
        ->required()
        ->expected(info.min_inputs, info.max_inputs)
        ->check(CLI::ExistingFile);
    cmd->add_option("--tol", job.tol, "tolerance for every verdict in this job");
    cmd->add_option("--out", job.out, "write the output document here instead of stdout");
    cmd->add_flag("--table", job.table, "render reports as aligned text instead of JSON");
    if (info.has_seed) {
      cmd->add_option("--seed", job.seed, "seed for the random draw");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return run(job);
  } catch (const qcorr::ShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const qcorr::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
