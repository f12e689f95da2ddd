#include "mnr/classifier.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mnr/rng.hpp"

namespace mnr {

const char* category_name(PrefixCategory c) {
  switch (c) {
    case PrefixCategory::Get: return "GET";
    case PrefixCategory::Set: return "SET";
    case PrefixCategory::Is: return "IS";
    case PrefixCategory::Test: return "TEST";
    case PrefixCategory::Other: return "OTHER";
  }
  return "?";
}

const char* category_token(PrefixCategory c) {
  switch (c) {
    case PrefixCategory::Get: return "get";
    case PrefixCategory::Set: return "set";
    case PrefixCategory::Is: return "is";
    case PrefixCategory::Test: return "test";
    case PrefixCategory::Other: return "";
  }
  return "";
}

PrefixCategory derive_label(const SubtokenSequence& name_subtokens) {
  if (name_subtokens.empty()) throw std::invalid_argument("derive_label: empty name");
  const std::string& first = name_subtokens.front();
  if (first == "get") return PrefixCategory::Get;
  if (first == "set") return PrefixCategory::Set;
  if (first == "is") return PrefixCategory::Is;
  if (first == "test") return PrefixCategory::Test;
  return PrefixCategory::Other;
}

Eigen::VectorXd classifier_hidden(const ClassifierModel& model, const FeatureBag& bag) {
  Eigen::VectorXd hidden = Eigen::VectorXd::Zero(model.d);
  for (size_t i = 0; i < bag.indices.size(); ++i) {
    hidden += bag.weights[i] * model.A.row(bag.indices[i]).transpose();
  }
  return hidden;
}

static Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  Eigen::VectorXd shifted = logits.array() - logits.maxCoeff();
  Eigen::VectorXd e = shifted.array().exp();
  return e / e.sum();
}

Eigen::VectorXd forward(const ClassifierModel& model, const FeatureBag& bag) {
  Eigen::VectorXd hidden = classifier_hidden(model, bag);
  Eigen::VectorXd logits = model.B.transpose() * hidden + model.bias;
  return softmax(logits);
}

double nll_loss(const ClassifierModel& model, const std::vector<LabeledBag>& batch) {
  if (batch.empty()) throw std::invalid_argument("nll_loss: empty batch");
  double total = 0;
  for (const auto& [bag, label] : batch) {
    Eigen::VectorXd p = forward(model, bag);
    total += -std::log(std::max(p(static_cast<int>(label)), 1e-300));
  }
  return total / static_cast<double>(batch.size());
}

ClassifierGrads nll_gradients(const ClassifierModel& model,
                              const std::vector<LabeledBag>& batch) {
  if (batch.empty()) throw std::invalid_argument("nll_gradients: empty batch");
  ClassifierGrads g;
  g.dB = Eigen::MatrixXd::Zero(model.B.rows(), model.B.cols());
  g.dbias = Eigen::VectorXd::Zero(model.bias.size());
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  for (const auto& [bag, label] : batch) {
    Eigen::VectorXd hidden = classifier_hidden(model, bag);
    Eigen::VectorXd p = softmax(model.B.transpose() * hidden + model.bias);
    g.loss += -std::log(std::max(p(static_cast<int>(label)), 1e-300)) * inv_n;
    Eigen::VectorXd dlogits = p * inv_n;
    dlogits(static_cast<int>(label)) -= inv_n;
    g.dbias += dlogits;
    g.dB += hidden * dlogits.transpose();
    Eigen::VectorXd dhidden = model.B * dlogits;
    for (size_t i = 0; i < bag.indices.size(); ++i) {
      auto it = g.dA.find(bag.indices[i]);
      if (it == g.dA.end()) {
        g.dA.emplace(bag.indices[i], bag.weights[i] * dhidden);
      } else {
        it->second += bag.weights[i] * dhidden;
      }
    }
  }
  return g;
}

ClassifierTrainResult train_classifier(const std::vector<FeatureBag>& bags,
                                       const std::vector<PrefixCategory>& labels,
                                       const ClassifierTrainConfig& config) {
  if (bags.empty()) throw std::invalid_argument("train_classifier: empty training set");
  if (bags.size() != labels.size()) {
    throw std::invalid_argument("train_classifier: bags/labels size mismatch");
  }
  ClassifierModel model;
  model.d = config.d;
  model.hash_space = config.hash_space;
  model.rng_seed = config.seed;
  Rng rng(config.seed);
  model.A.resize(config.hash_space, config.d);
  const double bound = 1.0 / static_cast<double>(config.d);
  for (Eigen::Index r = 0; r < model.A.rows(); ++r) {
    for (Eigen::Index c = 0; c < model.A.cols(); ++c) {
      model.A(r, c) = rng.uniform(-bound, bound);
    }
  }
  model.B = Eigen::MatrixXd::Zero(config.d, kNumCategories);
  model.bias = Eigen::VectorXd::Zero(kNumCategories);

  ClassifierTrainResult result;
  const size_t n = bags.size();
  const double total_updates = static_cast<double>(config.epochs) * static_cast<double>(n);
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  size_t done = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0;
    for (size_t idx : order) {
      const FeatureBag& bag = bags[idx];
      const int label = static_cast<int>(labels[idx]);
      const double lr =
          config.learning_rate * (1.0 - static_cast<double>(done) / total_updates);
      Eigen::VectorXd hidden = classifier_hidden(model, bag);
      Eigen::VectorXd p = softmax(model.B.transpose() * hidden + model.bias);
      epoch_loss += -std::log(std::max(p(label), 1e-300));
      Eigen::VectorXd dlogits = p;
      dlogits(label) -= 1.0;
      Eigen::VectorXd dhidden = model.B * dlogits;
      model.B.noalias() -= lr * (hidden * dlogits.transpose());
      model.bias -= lr * dlogits;
      for (size_t i = 0; i < bag.indices.size(); ++i) {
        model.A.row(bag.indices[i]) -=
            (lr * bag.weights[i]) * dhidden.transpose();
      }
      ++done;
    }
    result.epoch_losses.push_back(epoch_loss / static_cast<double>(n));
  }
  result.model = std::move(model);
  return result;
}

ClassifierTrainResult train_classifier(const std::vector<MethodRecord>& records,
                                       const std::vector<PrefixCategory>& labels,
                                       const ClassifierTrainConfig& config) {
  std::vector<FeatureBag> bags;
  bags.reserve(records.size());
  for (const auto& r : records) bags.push_back(featurize(r, config.hash_space));
  return train_classifier(bags, labels, config);
}

std::pair<PrefixCategory, double> classify(const ClassifierModel& model,
                                           const MethodRecord& record) {
  Eigen::VectorXd p = forward(model, featurize(record, model.hash_space));
  int best = 0;
  for (int k = 1; k < kNumCategories; ++k) {
    if (p(k) > p(best)) best = k;  // strict: ties keep the earlier category
  }
  return {static_cast<PrefixCategory>(best), p(best)};
}

}  // namespace mnr
