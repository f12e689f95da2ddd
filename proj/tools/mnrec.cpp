#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "mnr/corpus.hpp"
#include "mnr/eval.hpp"
#include "mnr/extractor.hpp"
#include "mnr/pipeline.hpp"

namespace {

using namespace mnr;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct TrainFlags {
  std::string corpus;
  std::string output = "model.bin";
  uint64_t seed = 1;
  int classifier_epochs = 5;
  int generator_epochs = 30;
  int classifier_dim = 64;
  uint32_t hash_space = kDefaultHashSpace;
  int embed_dim = 64;
  int hidden_dim = 128;
  double classifier_lr = 0.1;
  double generator_lr = 0.05;
};

PipelineConfig to_config(const TrainFlags& f) {
  PipelineConfig cfg;
  cfg.classifier.epochs = f.classifier_epochs;
  cfg.classifier.d = f.classifier_dim;
  cfg.classifier.hash_space = f.hash_space;
  cfg.classifier.learning_rate = f.classifier_lr;
  cfg.generator.epochs = f.generator_epochs;
  cfg.generator.embed_dim = f.embed_dim;
  cfg.generator.hidden_dim = f.hidden_dim;
  cfg.generator.learning_rate = f.generator_lr;
  cfg.set_seed(f.seed);
  return cfg;
}

nlohmann::json recommendation_json(const MethodRecord& rec, const Recommendation& r) {
  nlohmann::json j;
  j["method_name"] = rec.method_name;
  j["class_name"] = rec.class_name;
  j["route"] = route_name(r.route);
  j["category"] = category_name(r.category);
  j["confidence"] = r.confidence;
  nlohmann::json cands = nlohmann::json::array();
  for (const auto& c : r.candidates) {
    cands.push_back({{"name", c.name}, {"subtokens", c.subtokens}, {"score", c.score}});
  }
  j["candidates"] = cands;
  return j;
}

int cmd_extract(const std::string& dir, const std::string& out_path) {
  if (!std::filesystem::is_directory(dir)) {
    std::cerr << "error: not a directory: " << dir << "\n";
    return kExitData;
  }
  MineSummary summary;
  auto records = mine_corpus(dir, &summary);
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return kExitData;
  }
  write_jsonl(out, records);
  for (const auto& d : summary.diagnostics) std::cerr << "warning: " << d << "\n";
  std::cerr << summary.files_seen << " files, " << summary.files_skipped
            << " skipped, " << summary.methods_mined << " methods mined\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-phase Java method name recommender"};
  app.require_subcommand(1);
  app.set_config("--config")->configurable(false);

  // extract
  std::string extract_dir, extract_out = "corpus.jsonl";
  auto* extract = app.add_subcommand("extract", "mine methods from .java sources");
  extract->add_option("dir", extract_dir, "directory of .java files")->required();
  extract->add_option("-o,--output", extract_out, "output JSONL path");

  // train
  TrainFlags tf;
  auto* train = app.add_subcommand("train", "train the two-phase model");
  train->add_option("corpus", tf.corpus, "training corpus (JSONL)")->required();
  train->add_option("-o,--output", tf.output, "model output path");
  train->add_option("--seed", tf.seed, "rng seed");
  train->add_option("--epochs", tf.classifier_epochs, "classifier epochs");
  train->add_option("--gen-epochs", tf.generator_epochs, "generator epochs");
  train->add_option("--dim", tf.classifier_dim, "classifier embedding dim");
  train->add_option("--hash-space", tf.hash_space, "feature hash space size");
  train->add_option("--embed-dim", tf.embed_dim, "generator embedding dim");
  train->add_option("--hidden-dim", tf.hidden_dim, "generator hidden dim");
  train->add_option("--lr", tf.classifier_lr, "classifier learning rate");
  train->add_option("--gen-lr", tf.generator_lr, "generator learning rate");

  // recommend
  std::string rec_model, rec_input;
  int top_k = 5;
  auto* rec_cmd = app.add_subcommand("recommend", "recommend names for methods");
  rec_cmd->add_option("model", rec_model, "model file")->required();
  rec_cmd->add_option("--input", rec_input, "methods JSONL")->required();
  rec_cmd->add_option("--top-k", top_k, "candidates per method");

  // classify
  std::string clf_model, clf_input;
  auto* clf_cmd = app.add_subcommand("classify", "phase-1 category per method");
  clf_cmd->add_option("model", clf_model, "model file")->required();
  clf_cmd->add_option("--input", clf_input, "methods JSONL")->required();

  // evaluate
  std::string eval_model, eval_test;
  int kfold = 0;
  auto* eval_cmd = app.add_subcommand("evaluate", "token P/R/F1 on a test corpus");
  eval_cmd->add_option("model", eval_model, "model file")->required();
  eval_cmd->add_option("--test", eval_test, "test corpus JSONL")->required();
  eval_cmd->add_option("--kfold", kfold, "cross-validate by retraining per fold");

  // synth
  size_t synth_n = 2000;
  uint64_t synth_seed = 1;
  std::string synth_out = "toy.jsonl";
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic corpus");
  synth_cmd->add_option("--n", synth_n, "number of methods");
  synth_cmd->add_option("-o,--output", synth_out, "output JSONL path");
  synth_cmd->add_option("--seed", synth_seed, "rng seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*extract) return cmd_extract(extract_dir, extract_out);

    if (*train) {
      CorpusReadSummary sum;
      auto records = read_jsonl_file(tf.corpus, &sum);
      if (sum.rejected) {
        std::cerr << "warning: rejected " << sum.rejected << " of " << sum.lines
                  << " lines\n";
      }
      if (records.empty()) {
        std::cerr << "error: empty training corpus\n";
        return kExitData;
      }
      std::vector<std::string> warnings;
      PipelineModel model = train_pipeline(records, to_config(tf), &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
      save_model(model, tf.output);
      std::cerr << "model written to " << tf.output << "\n";
      return kExitOk;
    }

    if (*rec_cmd) {
      PipelineModel model = load_model(rec_model);
      for (const auto& r : read_jsonl_file(rec_input)) {
        Recommendation rm = recommend(model, r, top_k);
        std::cout << recommendation_json(r, rm).dump() << "\n";
      }
      return kExitOk;
    }

    if (*clf_cmd) {
      PipelineModel model = load_model(clf_model);
      for (const auto& r : read_jsonl_file(clf_input)) {
        auto [cat, conf] = classify(model.classifier, r);
        nlohmann::json j{{"method_name", r.method_name},
                         {"category", category_name(cat)},
                         {"confidence", conf}};
        std::cout << j.dump() << "\n";
      }
      return kExitOk;
    }

    if (*eval_cmd) {
      PipelineModel model = load_model(eval_model);
      auto records = read_jsonl_file(eval_test);
      if (records.empty()) {
        std::cerr << "error: empty test corpus\n";
        return kExitData;
      }
      auto as_recommender = [](const PipelineModel& m) {
        return [&m](const MethodRecord& r) {
          return recommend(m, r, 1).candidates.front().subtokens;
        };
      };
      EvalReport report;
      if (kfold >= 2) {
        // retrain per fold with the loaded model's config
        std::vector<double> fold_f1;
        double p = 0, r = 0, f = 0, em = 0;
        size_t total = 0;
        auto folds = kfold_split(records.size(), kfold, model.config.classifier.seed);
        for (const auto& fold : folds) {
          std::vector<MethodRecord> train_set, test_set;
          for (size_t id : fold.train_ids) train_set.push_back(records[id]);
          for (size_t id : fold.test_ids) test_set.push_back(records[id]);
          PipelineModel fm = train_pipeline(train_set, model.config);
          EvalReport fr = evaluate(as_recommender(fm), test_set);
          fold_f1.push_back(fr.f1);
          p += fr.precision * fr.n_methods;
          r += fr.recall * fr.n_methods;
          f += fr.f1 * fr.n_methods;
          em += fr.exact_match * fr.n_methods;
          total += fr.n_methods;
        }
        report.n_methods = total;
        report.precision = p / total;
        report.recall = r / total;
        report.f1 = f / total;
        report.exact_match = em / total;
        report.fold_f1 = fold_f1;
      } else {
        report = evaluate(as_recommender(model), records);
      }
      std::cerr << report.to_table();
      std::cout << report.to_json() << "\n";
      return kExitOk;
    }

    if (*synth_cmd) {
      write_jsonl_file(synth_out, synth_corpus(synth_n, synth_seed));
      std::cerr << synth_n << " synthetic methods written to " << synth_out << "\n";
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
