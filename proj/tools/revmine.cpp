// Command-line front end: preprocess | train | extract | cluster | report | eval.

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "revmine/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;

struct Options {
  std::string config;
  std::string in;
  std::string out;
  std::string checkpoint;
  std::string phrases;
  std::string clusters;
  std::optional<std::uint64_t> seed;
};

CLI::App* add_stage(CLI::App& app, const std::string& name, const std::string& help, Options& o) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("--config", o.config, "pipeline config (JSON)")->required();
  sub->add_option("--in", o.in, "input path (overrides the config)");
  sub->add_option("--out", o.out, "output path (overrides the config)");
  sub->add_option("--seed", o.seed, "seed (overrides the config)");
  return sub;
}

std::string pick(const std::string& override_path, const std::string& fallback) {
  return override_path.empty() ? fallback : override_path;
}

int run(const std::string& stage, const Options& o) {
  revmine::PipelineConfig c = revmine::PipelineConfig::load(o.config);
  if (o.seed) {
    c.seed = *o.seed;
    c.train.seed = *o.seed;
  }
  const std::string checkpoint = pick(o.checkpoint, revmine::default_checkpoint_path(c));
  const std::string phrases = pick(o.phrases, revmine::default_phrases_path(c));

  if (stage == "preprocess") {
    const std::string out = pick(o.out, revmine::default_sentences_path(c));
    const auto n = revmine::cmd_preprocess(c, pick(o.in, c.paths.corpus), out);
    std::clog << "wrote " << n << " sentences to " << out << '\n';
  } else if (stage == "train") {
    const std::string out = pick(o.out, checkpoint);
    const auto r = revmine::cmd_train(c, pick(o.in, c.paths.labeled), out);
    std::clog << "wrote " << out << " (best epoch " << r.best_epoch << ")\n";
  } else if (stage == "extract") {
    const std::string out = pick(o.out, phrases);
    const auto n = revmine::cmd_extract(c, pick(o.in, revmine::default_sentences_path(c)), checkpoint, out);
    std::clog << "wrote " << n << " phrases to " << out << '\n';
  } else if (stage == "cluster") {
    const std::string out = pick(o.out, revmine::default_clusters_path(c));
    const auto set = revmine::cmd_cluster(c, pick(o.in, phrases), checkpoint, out);
    std::clog << "wrote " << set.clusters.size() << " clusters to " << out << '\n';
  } else if (stage == "report") {
    const std::string out = pick(o.out, revmine::default_report_path(c));
    revmine::cmd_report(c, pick(o.in, revmine::default_clusters_path(c)), phrases, out);
    std::clog << "wrote " << out << '\n';
  } else if (stage == "eval") {
    const std::string out = pick(o.out, revmine::default_eval_path(c));
    revmine::cmd_eval(c, pick(o.in, c.paths.labeled), out, std::cout,
                      pick(o.clusters, revmine::default_clusters_path(c)), phrases);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Problematic-feature mining for app reviews"};
  app.require_subcommand(1);
  Options o;
  add_stage(app, "preprocess", "split, clean and score review sentences", o);
  add_stage(app, "train", "train the extractor on labeled sentences", o);
  add_stage(app, "extract", "tag sentences and write phrase records", o)
      ->add_option("--checkpoint", o.checkpoint, "model checkpoint");
  add_stage(app, "cluster", "group phrases by similarity", o)
      ->add_option("--checkpoint", o.checkpoint, "checkpoint whose token table embeds phrases");
  add_stage(app, "report", "build the bubble-chart report", o)->add_option("--phrases", o.phrases, "phrase file");
  CLI::App* eval = add_stage(app, "eval", "nested cross-validation on labeled data", o);
  eval->add_option("--clusters", o.clusters, "cluster file scored against paths.gold_clusters");
  eval->add_option("--phrases", o.phrases, "phrase file matching --clusters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  const std::string stage = app.get_subcommands().front()->get_name();
  try {
    return run(stage, o);
  } catch (const revmine::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (...) {
    std::cerr << "internal error\n";
    return kExitInternal;
  }
}
