#pragma once

#include <Eigen/Core>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mnr/classifier.hpp"
#include "mnr/lstm.hpp"
#include "mnr/subtoken.hpp"
#include "mnr/types.hpp"
#include "mnr/vocab.hpp"

namespace mnr {

// Dual-LSTM name generator: one encoder over the tagged context sequence,
// one over the partial name; their final hidden states are concatenated and
// projected over the name vocabulary.
struct GeneratorModel {
  RowMajorMatrix context_embed;  // V_c x d_e
  RowMajorMatrix name_embed;     // V_n x d_e
  LstmParams gamma_c;            // context encoder
  LstmParams gamma_p;            // partial-name encoder
  Eigen::MatrixXd out_proj;      // (2*d_h) x V_n
  Eigen::VectorXd out_bias;      // V_n
  Vocabulary vocab_c;
  Vocabulary vocab_n;
  uint64_t seed = 0;
  size_t max_context_len = 200;

  int embed_dim() const { return static_cast<int>(context_embed.cols()); }
  int hidden_dim() const { return gamma_c.hidden_dim(); }
  int name_vocab_size() const { return static_cast<int>(name_embed.rows()); }
};

struct GeneratorTrainConfig {
  int epochs = 30;
  double learning_rate = 0.05;
  double clip_norm = 5.0;
  int embed_dim = 64;
  int hidden_dim = 128;
  uint64_t seed = 1;
  size_t max_context_len = 200;
  int vocab_min_count = 2;  // name-side; context side uses context_min_count
  int context_min_count = 5;
};

struct DecodeConfig {
  int beam_width = 5;
  int max_len = 8;
  double length_penalty = 0.7;  // alpha in [0,1]; score = logprob / len^alpha
};

// Final hidden state of gamma_c over the tagged context sequence; the zero
// vector when the sequence is empty.
Eigen::VectorXd encode_context(const GeneratorModel& model, const MethodRecord& record);

// Final hidden state of gamma_p over [START] + prefix tokens.
Eigen::VectorXd encode_partial(const GeneratorModel& model,
                               const SubtokenSequence& prefix_tokens);

// softmax(out_proj^T concat(e_c, e_p) + out_bias) over the name vocabulary.
Eigen::VectorXd next_token_distribution(const GeneratorModel& model,
                                        const Eigen::VectorXd& e_c,
                                        const Eigen::VectorXd& e_p);

struct GeneratorGrads {
  std::map<int32_t, Eigen::VectorXd> d_context_embed;
  std::map<int32_t, Eigen::VectorXd> d_name_embed;
  LstmGrads d_gamma_c, d_gamma_p;
  Eigen::MatrixXd d_out_proj;
  Eigen::VectorXd d_out_bias;

  static GeneratorGrads zeros(const GeneratorModel& m);
  double squared_norm() const;
  void scale(double s);
};

// Teacher-forced cross-entropy of one record, summed over name positions
// (gold tokens + END), with gradients for every parameter tensor.
// The gradient-check suite diffs this against finite differences.
double record_loss_and_grads(const GeneratorModel& model,
                             const std::vector<int32_t>& context_ids,
                             const std::vector<int32_t>& target_ids,
                             GeneratorGrads* grads);

std::vector<int32_t> context_ids_of(const GeneratorModel& model,
                                    const MethodRecord& record);
std::vector<int32_t> name_ids_of(const GeneratorModel& model,
                                 const SubtokenSequence& name);

struct GeneratorTrainResult {
  GeneratorModel model;
  std::vector<double> epoch_losses;  // mean per-position NLL
};

// Seeded per-record SGD with global-norm clipping. Throws on empty corpus.
GeneratorTrainResult train_generator(const std::vector<MethodRecord>& records,
                                     const GeneratorTrainConfig& config);

// Variant reusing prebuilt vocabularies (the pipeline shares them).
GeneratorTrainResult train_generator(const std::vector<MethodRecord>& records,
                                     const GeneratorTrainConfig& config,
                                     Vocabulary vocab_c, Vocabulary vocab_n);

struct DecodedName {
  SubtokenSequence tokens;
  double score;  // log-prob / len^alpha
};

// Standard beam search; hypotheses end on END or max_len. Deterministic
// tie-break by token ids. When force_first_token is set, the first emitted
// token is exactly that string (fed to gamma_p through its vocab id).
std::vector<DecodedName> beam_decode(const GeneratorModel& model,
                                     const MethodRecord& record,
                                     const DecodeConfig& config,
                                     const std::optional<std::string>& force_first_token =
                                         std::nullopt);

}  // namespace mnr
