#include "mnr/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mnr {

namespace {

Eigen::VectorXd stable_softmax(const Eigen::VectorXd& logits) {
  Eigen::VectorXd shifted = logits.array() - logits.maxCoeff();
  Eigen::VectorXd e = shifted.array().exp();
  return e / e.sum();
}

// Runs an encoder over a sequence of embedding ids; returns per-step caches
// when requested. The final hidden state of an empty sequence is zero.
Eigen::VectorXd run_encoder(const LstmParams& lstm, const RowMajorMatrix& embed,
                            const std::vector<int32_t>& ids,
                            std::vector<LstmStepCache>* caches) {
  const int d_h = lstm.hidden_dim();
  Eigen::VectorXd h = Eigen::VectorXd::Zero(d_h);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(d_h);
  for (int32_t id : ids) {
    Eigen::VectorXd x = embed.row(id).transpose();
    Eigen::VectorXd h2, c2;
    if (caches) {
      caches->emplace_back();
      lstm_step(lstm, x, h, c, h2, c2, &caches->back());
    } else {
      lstm_step(lstm, x, h, c, h2, c2, nullptr);
    }
    h = std::move(h2);
    c = std::move(c2);
  }
  return h;
}

void add_embed_grad(std::map<int32_t, Eigen::VectorXd>& acc, int32_t id,
                    const Eigen::VectorXd& g) {
  auto it = acc.find(id);
  if (it == acc.end()) {
    acc.emplace(id, g);
  } else {
    it->second += g;
  }
}

// BPTT over an encoder run: dh_per_step[t] is the gradient flowing into the
// hidden state emitted at step t. Embedding gradients accumulate per id.
void encoder_backward(const LstmParams& lstm, const std::vector<LstmStepCache>& caches,
                      const std::vector<int32_t>& ids,
                      const std::vector<Eigen::VectorXd>& dh_per_step, LstmGrads& grads,
                      std::map<int32_t, Eigen::VectorXd>& embed_grads) {
  const int d_h = lstm.hidden_dim();
  Eigen::VectorXd dh = Eigen::VectorXd::Zero(d_h);
  Eigen::VectorXd dc = Eigen::VectorXd::Zero(d_h);
  for (size_t t = caches.size(); t-- > 0;) {
    Eigen::VectorXd dh_total = dh;
    if (!dh_per_step[t].size()) {
      // no external gradient at this step
    } else {
      dh_total += dh_per_step[t];
    }
    Eigen::VectorXd dx, dh_prev, dc_prev;
    lstm_step_backward(lstm, caches[t], dh_total, dc, grads, dx, dh_prev, dc_prev);
    add_embed_grad(embed_grads, ids[t], dx);
    dh = std::move(dh_prev);
    dc = std::move(dc_prev);
  }
}

}  // namespace

std::vector<int32_t> context_ids_of(const GeneratorModel& model,
                                    const MethodRecord& record) {
  std::vector<int32_t> ids;
  for (const auto& tok : context_sequence(record, model.max_context_len)) {
    ids.push_back(model.vocab_c.id_of(tok));
  }
  return ids;
}

std::vector<int32_t> name_ids_of(const GeneratorModel& model,
                                 const SubtokenSequence& name) {
  std::vector<int32_t> ids;
  for (const auto& tok : name) ids.push_back(model.vocab_n.id_of(tok));
  return ids;
}

Eigen::VectorXd encode_context(const GeneratorModel& model, const MethodRecord& record) {
  return run_encoder(model.gamma_c, model.context_embed, context_ids_of(model, record),
                     nullptr);
}

Eigen::VectorXd encode_partial(const GeneratorModel& model,
                               const SubtokenSequence& prefix_tokens) {
  std::vector<int32_t> ids{Vocabulary::kStart};
  for (const auto& tok : prefix_tokens) ids.push_back(model.vocab_n.id_of(tok));
  return run_encoder(model.gamma_p, model.name_embed, ids, nullptr);
}

Eigen::VectorXd next_token_distribution(const GeneratorModel& model,
                                        const Eigen::VectorXd& e_c,
                                        const Eigen::VectorXd& e_p) {
  const int d_h = model.hidden_dim();
  Eigen::VectorXd u(2 * d_h);
  u.head(d_h) = e_c;
  u.tail(d_h) = e_p;
  return stable_softmax(model.out_proj.transpose() * u + model.out_bias);
}

GeneratorGrads GeneratorGrads::zeros(const GeneratorModel& m) {
  GeneratorGrads g;
  g.d_gamma_c = LstmGrads::zeros(m.embed_dim(), m.hidden_dim());
  g.d_gamma_p = LstmGrads::zeros(m.embed_dim(), m.hidden_dim());
  g.d_out_proj = Eigen::MatrixXd::Zero(m.out_proj.rows(), m.out_proj.cols());
  g.d_out_bias = Eigen::VectorXd::Zero(m.out_bias.size());
  return g;
}

double GeneratorGrads::squared_norm() const {
  double s = d_gamma_c.squared_norm() + d_gamma_p.squared_norm() +
             d_out_proj.squaredNorm() + d_out_bias.squaredNorm();
  for (const auto& [id, v] : d_context_embed) s += v.squaredNorm();
  for (const auto& [id, v] : d_name_embed) s += v.squaredNorm();
  return s;
}

void GeneratorGrads::scale(double s) {
  d_gamma_c.scale(s);
  d_gamma_p.scale(s);
  d_out_proj *= s;
  d_out_bias *= s;
  for (auto& [id, v] : d_context_embed) v *= s;
  for (auto& [id, v] : d_name_embed) v *= s;
}

double record_loss_and_grads(const GeneratorModel& model,
                             const std::vector<int32_t>& context_ids,
                             const std::vector<int32_t>& target_ids,
                             GeneratorGrads* grads) {
  if (target_ids.empty()) {
    throw std::invalid_argument("record_loss_and_grads: no targets");
  }
  const int d_h = model.hidden_dim();

  std::vector<LstmStepCache> ctx_caches;
  Eigen::VectorXd e_c =
      run_encoder(model.gamma_c, model.context_embed, context_ids,
                  grads ? &ctx_caches : nullptr);

  // gamma_p consumes [START] + gold tokens (END is only ever a target).
  std::vector<int32_t> p_inputs{Vocabulary::kStart};
  p_inputs.insert(p_inputs.end(), target_ids.begin(), target_ids.end() - 1);
  std::vector<LstmStepCache> p_caches;
  std::vector<Eigen::VectorXd> p_hidden;  // hidden after consuming p_inputs[0..t]
  {
    Eigen::VectorXd h = Eigen::VectorXd::Zero(d_h);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(d_h);
    for (int32_t id : p_inputs) {
      Eigen::VectorXd x = model.name_embed.row(id).transpose();
      Eigen::VectorXd h2, c2;
      if (grads) {
        p_caches.emplace_back();
        lstm_step(model.gamma_p, x, h, c, h2, c2, &p_caches.back());
      } else {
        lstm_step(model.gamma_p, x, h, c, h2, c2, nullptr);
      }
      h = std::move(h2);
      c = std::move(c2);
      p_hidden.push_back(h);
    }
  }

  double loss = 0;
  Eigen::VectorXd de_c = Eigen::VectorXd::Zero(d_h);
  std::vector<Eigen::VectorXd> dh_p(p_inputs.size());
  for (size_t t = 0; t < target_ids.size(); ++t) {
    const Eigen::VectorXd& e_p = p_hidden[t];
    Eigen::VectorXd u(2 * d_h);
    u.head(d_h) = e_c;
    u.tail(d_h) = e_p;
    Eigen::VectorXd p = stable_softmax(model.out_proj.transpose() * u + model.out_bias);
    loss += -std::log(std::max(p(target_ids[t]), 1e-300));
    if (grads) {
      Eigen::VectorXd dz = p;
      dz(target_ids[t]) -= 1.0;
      grads->d_out_proj.noalias() += u * dz.transpose();
      grads->d_out_bias += dz;
      Eigen::VectorXd du = model.out_proj * dz;
      de_c += du.head(d_h);
      if (dh_p[t].size()) {
        dh_p[t] += du.tail(d_h);
      } else {
        dh_p[t] = du.tail(d_h);
      }
    }
  }

  if (grads) {
    encoder_backward(model.gamma_p, p_caches, p_inputs, dh_p, grads->d_gamma_p,
                     grads->d_name_embed);
    if (!context_ids.empty()) {
      std::vector<Eigen::VectorXd> dh_c(context_ids.size());
      dh_c.back() = de_c;
      encoder_backward(model.gamma_c, ctx_caches, context_ids, dh_c, grads->d_gamma_c,
                       grads->d_context_embed);
    }
  }
  return loss;
}

GeneratorTrainResult train_generator(const std::vector<MethodRecord>& records,
                                     const GeneratorTrainConfig& config) {
  Vocabulary vc = Vocabulary::build(records, config.context_min_count, VocabRole::Context);
  Vocabulary vn = Vocabulary::build(records, config.vocab_min_count, VocabRole::Name);
  return train_generator(records, config, std::move(vc), std::move(vn));
}

GeneratorTrainResult train_generator(const std::vector<MethodRecord>& records,
                                     const GeneratorTrainConfig& config,
                                     Vocabulary vocab_c, Vocabulary vocab_n) {
  if (records.empty()) {
    throw std::invalid_argument("train_generator: empty training set");
  }
  GeneratorModel model;
  model.vocab_c = std::move(vocab_c);
  model.vocab_n = std::move(vocab_n);
  model.seed = config.seed;
  model.max_context_len = config.max_context_len;
  Rng rng(config.seed);
  const int d_e = config.embed_dim;
  const int d_h = config.hidden_dim;
  const double bound_e = 1.0 / std::sqrt(static_cast<double>(d_e));
  const double bound_h = 1.0 / std::sqrt(static_cast<double>(d_h));
  auto init_matrix = [&](auto& m, Eigen::Index rows, Eigen::Index cols, double bound) {
    m.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.uniform(-bound, bound);
    }
  };
  init_matrix(model.context_embed, model.vocab_c.size(), d_e, bound_e);
  init_matrix(model.name_embed, model.vocab_n.size(), d_e, bound_e);
  model.gamma_c = LstmParams::zeros(d_e, d_h);
  model.gamma_c.init_uniform(bound_h, rng);
  model.gamma_p = LstmParams::zeros(d_e, d_h);
  model.gamma_p.init_uniform(bound_h, rng);
  init_matrix(model.out_proj, 2 * d_h, model.vocab_n.size(), bound_h);
  model.out_bias = Eigen::VectorXd::Zero(model.vocab_n.size());

  // precompute id sequences
  std::vector<std::vector<int32_t>> ctx(records.size());
  std::vector<std::vector<int32_t>> targets(records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    ctx[i] = context_ids_of(model, records[i]);
    targets[i] = name_ids_of(model, split_identifier(records[i].method_name));
    targets[i].push_back(Vocabulary::kEnd);
  }

  GeneratorTrainResult result;
  std::vector<size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0;
    size_t positions = 0;
    for (size_t idx : order) {
      GeneratorGrads g = GeneratorGrads::zeros(model);
      double loss = record_loss_and_grads(model, ctx[idx], targets[idx], &g);
      epoch_loss += loss;
      positions += targets[idx].size();
      double norm = std::sqrt(g.squared_norm());
      if (norm > config.clip_norm && norm > 0) g.scale(config.clip_norm / norm);
      const double lr = config.learning_rate;
      for (auto& [id, v] : g.d_context_embed) {
        model.context_embed.row(id) -= lr * v.transpose();
      }
      for (auto& [id, v] : g.d_name_embed) {
        model.name_embed.row(id) -= lr * v.transpose();
      }
      auto pw = model.gamma_c.weight_list();
      auto gw = std::vector<const Eigen::MatrixXd*>{
          &g.d_gamma_c.W_i, &g.d_gamma_c.W_f, &g.d_gamma_c.W_o, &g.d_gamma_c.W_g,
          &g.d_gamma_c.U_i, &g.d_gamma_c.U_f, &g.d_gamma_c.U_o, &g.d_gamma_c.U_g};
      for (size_t k = 0; k < pw.size(); ++k) *pw[k] -= lr * *gw[k];
      auto pb = model.gamma_c.bias_list();
      auto gb = std::vector<const Eigen::VectorXd*>{&g.d_gamma_c.b_i, &g.d_gamma_c.b_f,
                                                    &g.d_gamma_c.b_o, &g.d_gamma_c.b_g};
      for (size_t k = 0; k < pb.size(); ++k) *pb[k] -= lr * *gb[k];
      auto pw2 = model.gamma_p.weight_list();
      auto gw2 = std::vector<const Eigen::MatrixXd*>{
          &g.d_gamma_p.W_i, &g.d_gamma_p.W_f, &g.d_gamma_p.W_o, &g.d_gamma_p.W_g,
          &g.d_gamma_p.U_i, &g.d_gamma_p.U_f, &g.d_gamma_p.U_o, &g.d_gamma_p.U_g};
      for (size_t k = 0; k < pw2.size(); ++k) *pw2[k] -= lr * *gw2[k];
      auto pb2 = model.gamma_p.bias_list();
      auto gb2 = std::vector<const Eigen::VectorXd*>{&g.d_gamma_p.b_i, &g.d_gamma_p.b_f,
                                                     &g.d_gamma_p.b_o, &g.d_gamma_p.b_g};
      for (size_t k = 0; k < pb2.size(); ++k) *pb2[k] -= lr * *gb2[k];
      model.out_proj -= lr * g.d_out_proj;
      model.out_bias -= lr * g.d_out_bias;
    }
    result.epoch_losses.push_back(epoch_loss / static_cast<double>(positions));
  }
  result.model = std::move(model);
  return result;
}

namespace {

struct Hypothesis {
  std::vector<int32_t> ids;           // emitted name-token ids (END excluded)
  std::vector<std::string> literals;  // emitted token texts (covers forced tokens)
  double logprob = 0;
  Eigen::VectorXd h, c;
  bool done = false;
};

bool id_seq_less(const std::vector<int32_t>& a, const std::vector<int32_t>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

std::vector<DecodedName> beam_decode(const GeneratorModel& model,
                                     const MethodRecord& record,
                                     const DecodeConfig& config,
                                     const std::optional<std::string>& force_first_token) {
  if (config.beam_width < 1) throw std::invalid_argument("beam_decode: beam_width < 1");
  const int d_h = model.hidden_dim();
  Eigen::VectorXd e_c = encode_context(model, record);

  auto advance = [&](const Eigen::VectorXd& h, const Eigen::VectorXd& c, int32_t id,
                     Eigen::VectorXd& h2, Eigen::VectorXd& c2) {
    Eigen::VectorXd x = model.name_embed.row(id).transpose();
    lstm_step(model.gamma_p, x, h, c, h2, c2, nullptr);
  };

  Hypothesis root;
  root.h = Eigen::VectorXd::Zero(d_h);
  root.c = Eigen::VectorXd::Zero(d_h);
  {
    Eigen::VectorXd h2, c2;
    advance(root.h, root.c, Vocabulary::kStart, h2, c2);
    root.h = std::move(h2);
    root.c = std::move(c2);
  }

  std::vector<Hypothesis> live{std::move(root)};
  std::vector<Hypothesis> finished;
  bool first_step = true;

  while (!live.empty()) {
    std::vector<Hypothesis> candidates;
    for (const Hypothesis& hyp : live) {
      Eigen::VectorXd dist = next_token_distribution(model, e_c, hyp.h);
      if (first_step && force_first_token) {
        int32_t id = model.vocab_n.id_of(*force_first_token);
        Hypothesis next = hyp;
        next.logprob += std::log(std::max(dist(id), 1e-300));
        next.ids.push_back(id);
        next.literals.push_back(*force_first_token);
        Eigen::VectorXd h2, c2;
        advance(hyp.h, hyp.c, id, h2, c2);
        next.h = std::move(h2);
        next.c = std::move(c2);
        candidates.push_back(std::move(next));
        continue;
      }
      for (int32_t id = 0; id < model.name_vocab_size(); ++id) {
        if (id == Vocabulary::kPad || id == Vocabulary::kUnk || id == Vocabulary::kStart) {
          continue;
        }
        Hypothesis next = hyp;
        next.logprob += std::log(std::max(dist(id), 1e-300));
        if (id == Vocabulary::kEnd) {
          next.done = true;
        } else {
          next.ids.push_back(id);
          next.literals.push_back(model.vocab_n.token_of(id));
          Eigen::VectorXd h2, c2;
          advance(hyp.h, hyp.c, id, h2, c2);
          next.h = std::move(h2);
          next.c = std::move(c2);
        }
        candidates.push_back(std::move(next));
      }
    }
    first_step = false;
    std::sort(candidates.begin(), candidates.end(),
              [](const Hypothesis& a, const Hypothesis& b) {
                if (a.logprob != b.logprob) return a.logprob > b.logprob;
                return id_seq_less(a.ids, b.ids);
              });
    if (candidates.size() > static_cast<size_t>(config.beam_width)) {
      candidates.resize(config.beam_width);
    }
    live.clear();
    for (Hypothesis& hyp : candidates) {
      if (hyp.done || static_cast<int>(hyp.ids.size()) >= config.max_len) {
        finished.push_back(std::move(hyp));
      } else {
        live.push_back(std::move(hyp));
      }
    }
  }

  auto final_score = [&](const Hypothesis& hyp) {
    double len = std::max<size_t>(hyp.ids.size(), 1);
    return hyp.logprob / std::pow(len, config.length_penalty);
  };
  std::sort(finished.begin(), finished.end(),
            [&](const Hypothesis& a, const Hypothesis& b) {
              double sa = final_score(a), sb = final_score(b);
              if (sa != sb) return sa > sb;
              return id_seq_less(a.ids, b.ids);
            });
  std::vector<DecodedName> out;
  for (const Hypothesis& hyp : finished) {
    if (out.size() >= static_cast<size_t>(config.beam_width)) break;
    out.push_back(DecodedName{hyp.literals, final_score(hyp)});
  }
  return out;
}

}  // namespace mnr
