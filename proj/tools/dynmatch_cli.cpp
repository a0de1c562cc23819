// Command-line harness: runs an update stream (from a file or a seeded
// workload generator) through the dynamic matcher, printing one delta record
// per matching change and a final JSON statistics document.
//
// Exit codes: 0 success; 2 bad input (parse/validation); 3 verification
// failure; 4 internal invariant violation.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dynmatch/dynmatch.hpp"

namespace {

int run(const dynmatch::StreamFile& stream, dynmatch::Config cfg,
        const std::string& verify, const std::string& stats_out) {
  using namespace dynmatch;
  DynamicMatching engine(cfg);

  for (std::size_t i = 0; i < stream.batches.size(); ++i) {
    BatchReport rep = engine.apply_batch(stream.batches[i]);
    std::cout << "# batch " << i << "\n";
    for (const auto& [k, lvl] : rep.matched_added) {
      std::cout << "matched " << k.str() << " @ level " << lvl << "\n";
    }
    for (const EdgeKey& k : rep.matched_removed) {
      std::cout << "unmatched " << k.str() << "\n";
    }
    bool check = verify == "every-batch" ||
                 (verify == "final" && i + 1 == stream.batches.size());
    if (check) {
      auto bad = check_state(engine);
      auto bad2 = check_maximality(engine);
      bad.insert(bad.end(), bad2.begin(), bad2.end());
      if (!bad.empty()) {
        for (const std::string& s : bad) std::cerr << "violation: " << s << "\n";
        return 3;
      }
    }
  }

  double mu = default_mu(engine.config().alpha, engine.config().log2_capacity());
  nlohmann::json stats = build_report(engine.meter(), engine.tracker(), engine.config(),
                                      engine.total_updates(), mu);
  if (!stats_out.empty()) {
    std::ofstream out(stats_out);
    if (!out) {
      std::cerr << "cannot write " << stats_out << "\n";
      return 2;
    }
    out << stats.dump(2) << "\n";
  } else {
    std::cout << stats.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Batch-dynamic maximal matching on rank-r hypergraphs"};

  std::string input, generator, verify = "none", stats_out, dump_stream;
  std::uint64_t n = 100, batches = 10, batch_size = 32, seed = 0, initial_n = 0;
  std::uint64_t c_sub = 4, settle_cap = 0;
  std::size_t r = 2;
  double insert_ratio = 0.5;

  auto* in_opt = app.add_option("--input", input, "Update stream file");
  auto* gen_opt =
      app.add_option("--generate", generator,
                     "Workload generator: uniform-mix | sliding-window | "
                     "insert-all-then-delete-all | hypergraph-random");
  in_opt->excludes(gen_opt);
  app.add_option("--n", n, "Vertex universe size for generated workloads");
  app.add_option("--r", r, "Maximum hyperedge rank");
  app.add_option("--batches", batches, "Generated batch count");
  app.add_option("--batch-size", batch_size, "Generated operations per batch");
  app.add_option("--insert-ratio", insert_ratio, "Generated insert probability");
  app.add_option("--seed", seed, "PRNG seed (engine and generator streams are disjoint)");
  app.add_option("--verify", verify, "Oracle checks: none | final | every-batch")
      ->check(CLI::IsMember({"none", "final", "every-batch"}));
  app.add_option("--stats-out", stats_out, "Write the statistics JSON here instead of stdout");
  app.add_option("--c-sub", c_sub, "Subsettle iterations constant");
  app.add_option("--settle-cap", settle_cap, "Absolute settle repetition cap override");
  app.add_option("--initial-N", initial_n, "Initial capacity bound N");
  app.add_option("--dump-stream", dump_stream, "Also write the generated stream to this file");

  CLI11_PARSE(app, argc, argv);

  try {
    dynmatch::StreamFile stream;
    if (!input.empty()) {
      std::ifstream in(input);
      if (!in) {
        std::cerr << "cannot open " << input << "\n";
        return 2;
      }
      stream = dynmatch::parse_stream(in, r);
    } else if (!generator.empty()) {
      dynmatch::WorkloadSpec spec;
      spec.generator = generator;
      spec.n = n;
      spec.r = r;
      spec.batch_count = batches;
      spec.batch_size = batch_size;
      spec.insert_ratio = insert_ratio;
      // Generator randomness is disjoint from the engine's stream.
      spec.seed = seed ^ 0x9e3779b97f4a7c15ull;
      stream = dynmatch::generate(spec);
      if (!dump_stream.empty()) {
        std::ofstream out(dump_stream);
        if (!out) {
          std::cerr << "cannot write " << dump_stream << "\n";
          return 2;
        }
        out << dynmatch::serialize_stream(stream);
      }
    } else {
      std::cerr << "one of --input or --generate is required\n";
      return 2;
    }

    dynmatch::Config cfg = dynmatch::Config::make(
        r, initial_n ? initial_n : dynmatch::Config::default_capacity(n), seed);
    cfg.subsettle_iter_const = c_sub;
    cfg.settle_cap_override = settle_cap;
    return run(stream, cfg, verify, stats_out);
  } catch (const dynmatch::InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  } catch (const dynmatch::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
