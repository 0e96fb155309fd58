// Command-line front end: single-operator synthesis, the two random-circuit
// benchmark protocols, the block-class census, reversible-circuit
// re-synthesis, and parity-table (ancilla) synthesis.
//
// Exit codes: 0 success, 1 usage error, 2 input error, 3 no method
// succeeded.

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "cnotsynth/ancilla.hpp"
#include "cnotsynth/bench.hpp"
#include "cnotsynth/bruteforce.hpp"
#include "cnotsynth/qc_io.hpp"
#include "cnotsynth/resynth.hpp"

using namespace cnot;

namespace {

BitMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open '" + path + "'", 0);
  return read_matrix(in);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot open '" + path + "' for writing", 0);
  return out;
}

int cmd_synth(const std::string& matrix_path, const std::string& out_path,
              const std::string& methods_csv, std::uint64_t seed) {
  BitMatrix a = read_matrix_file(matrix_path);
  if (!a.is_square()) {
    std::cerr << "error: operator must be square\n";
    return 2;
  }
  std::vector<std::string> methods =
      methods_csv.empty() ? default_methods() : parse_method_list(methods_csv);
  PortfolioResult res = run_portfolio(methods, a, seed);
  for (const MethodRun& run : res.runs) {
    std::cerr << run.tag << ": ";
    if (run.result)
      std::cerr << "depth " << run.result->depth << ", cnots " << run.result->cnot_count
                << '\n';
    else
      std::cerr << "failed\n";
  }
  if (!res.best) {
    std::cerr << "error: no method produced a circuit\n";
    return 3;
  }
  std::cerr << "best: " << res.best->method << " (depth " << res.best->depth << ", cnots "
            << res.best->cnot_count << ")\n";
  QcFile qc;
  qc.wire_names = default_wire_names(a.n_rows());
  qc.circuit = res.best->circuit;
  const Permutation& perm = res.best->out_permutation;
  if (!out_path.empty()) {
    std::ofstream out = open_out(out_path);
    write_qc(out, qc, &perm);
  } else {
    write_qc(std::cout, qc, &perm);
  }
  return 0;
}

int emit_bench(const std::vector<BenchRow>& rows, const std::string& csv_path,
               bool zero_ms) {
  if (!csv_path.empty()) {
    std::ofstream out = open_out(csv_path);
    write_csv(out, rows, zero_ms);
  } else {
    write_csv(std::cout, rows, zero_ms);
  }
  return 0;
}

int cmd_table2(std::size_t k, std::size_t max_depth, const std::string& out_path) {
  std::map<std::size_t, std::size_t> counts;
  if (k <= 4) {
    BfsResult res = bfs_depth_classes(k);
    counts = res.class_counts;
    if (!out_path.empty()) {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw parse_error("cannot open '" + out_path + "' for writing", 0);
      save_block_tables(out, res.tables);
      std::cerr << "wrote reduction tables to " << out_path << '\n';
    }
  } else {
    std::cerr << "k=" << k << ": exploring canonical classes, this can take a while\n";
    counts = class_counts_large(k, max_depth);
    if (!out_path.empty())
      std::cerr << "note: reduction tables are only generated for k <= 4\n";
  }
  for (auto [depth, count] : counts) {
    if (depth > max_depth) break;
    std::cout << "depth " << depth << ": " << count << '\n';
  }
  return 0;
}

int cmd_resynth(const std::string& in_path, const std::string& out_path,
                const std::string& methods_csv, std::uint64_t seed,
                const std::string& parities_prefix) {
  std::ifstream in(in_path);
  if (!in) throw parse_error("cannot open '" + in_path + "'", 0);
  QcFile input = read_qc(in);
  std::vector<std::string> methods =
      methods_csv.empty() ? default_methods() : parse_method_list(methods_csv);

  ChunkParities parities;
  if (!parities_prefix.empty()) {
    for (std::size_t i = 0;; ++i) {
      std::ifstream fin(parities_prefix + "." + std::to_string(i) + ".in");
      std::ifstream fout(parities_prefix + "." + std::to_string(i) + ".out");
      if (!fin || !fout) break;
      parities.emplace(i, std::make_pair(ParityTable{read_matrix(fin)},
                                         ParityTable{read_matrix(fout)}));
    }
    std::cerr << "loaded parity tables for " << parities.size() << " chunk(s)\n";
  }

  ResynthReport rep = resynthesize(input, methods, seed, parities);
  std::cerr << "chunks: " << rep.chunk_count << '\n';
  std::cerr << "depth: " << rep.before.depth << " -> " << rep.after.depth << '\n';
  std::cerr << "cnots: " << rep.before.cnots << " -> " << rep.after.cnots << '\n';
  std::cerr << "T-count: " << rep.before.t_count << " -> " << rep.after.t_count << '\n';
  std::cerr << "T-depth: " << rep.before.t_depth << " -> " << rep.after.t_depth << '\n';
  if (rep.reverted) std::cerr << "note: replacement reverted, original kept\n";
  for (const auto& [tag, wins] : rep.wins)
    std::cerr << "wins[" << tag << "]: best " << wins.best << ", only " << wins.only_best
              << '\n';
  if (!out_path.empty()) {
    std::ofstream out = open_out(out_path);
    write_qc(out, rep.output, &rep.out_perm);
  } else {
    write_qc(std::cout, rep.output, &rep.out_perm);
  }
  return 0;
}

int cmd_ancilla(const std::string& ain_path, const std::string& aout_path,
                const std::string& out_path, const std::string& method,
                const std::string& methods_csv, std::uint64_t seed) {
  BitMatrix aout = read_matrix_file(aout_path);
  BitMatrix ain(aout.n_rows(), aout.n_cols());
  if (!ain_path.empty()) {
    ain = read_matrix_file(ain_path);
  } else {
    // fresh ancillas: identity parities on the first n wires, zero elsewhere
    for (std::size_t i = 0; i < aout.n_cols(); ++i) ain.set(i, i, true);
  }

  Circuit circuit(aout.n_rows());
  if (method == "block") {
    AncillaResult res = ancilla_synth(ParityTable{ain}, ParityTable{aout});
    circuit = res.circuit;
  } else if (method == "direct") {
    if (ain.n_rows() != ain.n_cols()) {
      std::cerr << "error: the direct method needs square tables (p == n)\n";
      return 2;
    }
    BitMatrix op = aout.multiply(ain.invert());
    std::vector<std::string> methods =
        methods_csv.empty() ? default_methods() : parse_method_list(methods_csv);
    PortfolioResult res = run_portfolio(methods, op, seed);
    if (!res.best) {
      std::cerr << "error: no method produced a circuit\n";
      return 3;
    }
    circuit = res.best->circuit;
    circuit.append(realize_permutation(res.best->out_permutation));
  } else {
    std::cerr << "error: method must be 'block' or 'direct'\n";
    return 1;
  }

  std::cerr << "depth " << depth_slices(circuit) << ", cnots " << circuit.gates.size()
            << '\n';
  QcFile qc;
  qc.wire_names = default_wire_names(circuit.n_wires);
  qc.circuit = circuit;
  if (!out_path.empty()) {
    std::ofstream out = open_out(out_path);
    write_qc(out, qc);
  } else {
    write_qc(std::cout, qc);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"depth-optimized CNOT circuit synthesis"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::size_t jobs = std::thread::hardware_concurrency();
  app.add_option("--seed", seed, "PRNG seed")->capture_default_str();
  app.add_option("--jobs", jobs, "worker threads for benchmarks");

  // synth
  std::string synth_matrix, synth_out, synth_methods;
  CLI::App* synth = app.add_subcommand("synth", "synthesize one operator from a matrix file");
  synth->add_option("matrix", synth_matrix, "matrix text file")->required();
  synth->add_option("--out", synth_out, ".qc output path (default: stdout)");
  synth->add_option("--methods", synth_methods, "comma-separated method list");

  // bench worst / sweep
  CLI::App* bench = app.add_subcommand("bench", "random-circuit benchmarks");
  bench->require_subcommand(1);
  std::size_t nmin = 2, nmax = 60, samples = 20, sweep_n = 60, dmin = 1, dmax = 80;
  std::string bench_methods, csv_path;
  bool zero_ms = false;
  CLI::App* worst = bench->add_subcommand("worst", "operators from depth-2n circuits");
  worst->add_option("--nmin", nmin, "smallest register size")->capture_default_str();
  worst->add_option("--nmax", nmax, "largest register size")->capture_default_str();
  CLI::App* sweep = bench->add_subcommand("sweep", "fixed n, generation depth sweep");
  sweep->add_option("--n", sweep_n, "register size")->capture_default_str();
  sweep->add_option("--dmin", dmin, "smallest generation depth")->capture_default_str();
  sweep->add_option("--dmax", dmax, "largest generation depth")->capture_default_str();
  for (CLI::App* b : {worst, sweep}) {
    b->add_option("--samples", samples, "instances per configuration")->capture_default_str();
    b->add_option("--methods", bench_methods, "comma-separated method list");
    b->add_option("--csv", csv_path, "CSV output path (default: stdout)");
    b->add_flag("--zero-ms", zero_ms, "zero the timing column (reproducible diffs)");
  }

  // table2
  std::size_t table_k = 3, table_max_depth = SIZE_MAX;
  std::string table_out;
  CLI::App* table2 = app.add_subcommand("table2", "census of block classes by reduction depth");
  table2->add_option("--k", table_k, "block size (1..6; 5 and 6 are long runs)")->required();
  table2->add_option("--max-depth", table_max_depth, "cap the explored depth");
  table2->add_option("--out", table_out, "write reduction tables (k <= 4)");

  // resynth
  std::string rin, rout, rmethods, rparities;
  CLI::App* resynth = app.add_subcommand("resynth", "re-synthesize the CNOT runs of a .qc circuit");
  resynth->add_option("input", rin, ".qc input path")->required();
  resynth->add_option("--out", rout, ".qc output path (default: stdout)");
  resynth->add_option("--methods", rmethods, "comma-separated method list");
  resynth->add_option("--parities", rparities,
                      "sidecar prefix: <prefix>.<chunk>.in/.out parity tables");

  // ancilla
  std::string ain, aout, aqc, amethod = "block", amethods;
  CLI::App* ancilla = app.add_subcommand("ancilla", "synthesize a parity-table transition");
  ancilla->add_option("--ain", ain, "input table (default: fresh ancillas [I; 0])");
  ancilla->add_option("--aout", aout, "output table")->required();
  ancilla->add_option("--out", aqc, ".qc output path (default: stdout)");
  ancilla->add_option("--method", amethod, "block | direct")->capture_default_str();
  ancilla->add_option("--methods", amethods, "portfolio for the direct method");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*synth) return cmd_synth(synth_matrix, synth_out, synth_methods, seed);
    if (*worst)
      return emit_bench(bench_worst(nmin, nmax, samples,
                                    bench_methods.empty() ? default_methods()
                                                          : parse_method_list(bench_methods),
                                    seed, jobs),
                        csv_path, zero_ms);
    if (*sweep)
      return emit_bench(bench_sweep(sweep_n, dmin, dmax, samples,
                                    bench_methods.empty() ? default_methods()
                                                          : parse_method_list(bench_methods),
                                    seed, jobs),
                        csv_path, zero_ms);
    if (*table2) return cmd_table2(table_k, table_max_depth, table_out);
    if (*resynth) return cmd_resynth(rin, rout, rmethods, seed, rparities);
    if (*ancilla) return cmd_ancilla(ain, aout, aqc, amethod, amethods, seed);
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const singular_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const rank_deficient_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const shape_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const unknown_method_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const unsupported_k_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const missing_table_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
