#include "mnr/lstm.hpp"

#include <stdexcept>

namespace mnr {

namespace {
Eigen::ArrayXd sigmoid(const Eigen::VectorXd& v) {
  return 1.0 / (1.0 + (-v.array()).exp());
}
}  // namespace

LstmParams LstmParams::zeros(int d_in, int d_h) {
  LstmParams p;
  for (auto* m : {&p.W_i, &p.W_f, &p.W_o, &p.W_g}) *m = Eigen::MatrixXd::Zero(d_h, d_in);
  for (auto* m : {&p.U_i, &p.U_f, &p.U_o, &p.U_g}) *m = Eigen::MatrixXd::Zero(d_h, d_h);
  for (auto* v : {&p.b_i, &p.b_f, &p.b_o, &p.b_g}) *v = Eigen::VectorXd::Zero(d_h);
  return p;
}

void LstmParams::init_uniform(double bound, Rng& rng) {
  for (auto* m : weight_list()) {
    for (Eigen::Index r = 0; r < m->rows(); ++r) {
      for (Eigen::Index c = 0; c < m->cols(); ++c) {
        (*m)(r, c) = rng.uniform(-bound, bound);
      }
    }
  }
  for (auto* v : bias_list()) v->setZero();
}

std::vector<const Eigen::MatrixXd*> LstmParams::weight_list() const {
  return {&W_i, &W_f, &W_o, &W_g, &U_i, &U_f, &U_o, &U_g};
}
std::vector<Eigen::MatrixXd*> LstmParams::weight_list() {
  return {&W_i, &W_f, &W_o, &W_g, &U_i, &U_f, &U_o, &U_g};
}
std::vector<const Eigen::VectorXd*> LstmParams::bias_list() const {
  return {&b_i, &b_f, &b_o, &b_g};
}
std::vector<Eigen::VectorXd*> LstmParams::bias_list() {
  return {&b_i, &b_f, &b_o, &b_g};
}

void lstm_step(const LstmParams& p, const Eigen::VectorXd& x, const Eigen::VectorXd& h,
               const Eigen::VectorXd& c, Eigen::VectorXd& h_out, Eigen::VectorXd& c_out,
               LstmStepCache* cache) {
  if (x.size() != p.input_dim() || h.size() != p.hidden_dim() ||
      c.size() != p.hidden_dim()) {
    throw std::invalid_argument("lstm_step: shape mismatch");
  }
  Eigen::VectorXd i = sigmoid(p.W_i * x + p.U_i * h + p.b_i);
  Eigen::VectorXd f = sigmoid(p.W_f * x + p.U_f * h + p.b_f);
  Eigen::VectorXd o = sigmoid(p.W_o * x + p.U_o * h + p.b_o);
  Eigen::VectorXd g = (p.W_g * x + p.U_g * h + p.b_g).array().tanh();
  c_out = f.array() * c.array() + i.array() * g.array();
  Eigen::VectorXd tc = c_out.array().tanh();
  h_out = o.array() * tc.array();
  if (cache) {
    cache->x = x;
    cache->h_prev = h;
    cache->c_prev = c;
    cache->i = std::move(i);
    cache->f = std::move(f);
    cache->o = std::move(o);
    cache->g = std::move(g);
    cache->c = c_out;
    cache->tanh_c = std::move(tc);
  }
}

LstmGrads LstmGrads::zeros(int d_in, int d_h) {
  LstmGrads g;
  for (auto* m : {&g.W_i, &g.W_f, &g.W_o, &g.W_g}) *m = Eigen::MatrixXd::Zero(d_h, d_in);
  for (auto* m : {&g.U_i, &g.U_f, &g.U_o, &g.U_g}) *m = Eigen::MatrixXd::Zero(d_h, d_h);
  for (auto* v : {&g.b_i, &g.b_f, &g.b_o, &g.b_g}) *v = Eigen::VectorXd::Zero(d_h);
  return g;
}

double LstmGrads::squared_norm() const {
  double s = 0;
  for (auto* m : {&W_i, &W_f, &W_o, &W_g, &U_i, &U_f, &U_o, &U_g}) s += m->squaredNorm();
  for (auto* v : {&b_i, &b_f, &b_o, &b_g}) s += v->squaredNorm();
  return s;
}

void LstmGrads::scale(double s) {
  for (auto* m : {&W_i, &W_f, &W_o, &W_g, &U_i, &U_f, &U_o, &U_g}) *m *= s;
  for (auto* v : {&b_i, &b_f, &b_o, &b_g}) *v *= s;
}

void lstm_step_backward(const LstmParams& p, const LstmStepCache& cc,
                        const Eigen::VectorXd& dh_out, const Eigen::VectorXd& dc_out,
                        LstmGrads& grads, Eigen::VectorXd& dx, Eigen::VectorXd& dh_prev,
                        Eigen::VectorXd& dc_prev) {
  Eigen::ArrayXd do_ = dh_out.array() * cc.tanh_c.array();
  Eigen::ArrayXd dc_total =
      dc_out.array() + dh_out.array() * cc.o.array() * (1.0 - cc.tanh_c.array().square());
  Eigen::ArrayXd df = dc_total * cc.c_prev.array();
  Eigen::ArrayXd di = dc_total * cc.g.array();
  Eigen::ArrayXd dg = dc_total * cc.i.array();
  dc_prev = (dc_total * cc.f.array()).matrix();

  Eigen::VectorXd da_i = (di * cc.i.array() * (1.0 - cc.i.array())).matrix();
  Eigen::VectorXd da_f = (df * cc.f.array() * (1.0 - cc.f.array())).matrix();
  Eigen::VectorXd da_o = (do_ * cc.o.array() * (1.0 - cc.o.array())).matrix();
  Eigen::VectorXd da_g = (dg * (1.0 - cc.g.array().square())).matrix();

  grads.W_i.noalias() += da_i * cc.x.transpose();
  grads.W_f.noalias() += da_f * cc.x.transpose();
  grads.W_o.noalias() += da_o * cc.x.transpose();
  grads.W_g.noalias() += da_g * cc.x.transpose();
  grads.U_i.noalias() += da_i * cc.h_prev.transpose();
  grads.U_f.noalias() += da_f * cc.h_prev.transpose();
  grads.U_o.noalias() += da_o * cc.h_prev.transpose();
  grads.U_g.noalias() += da_g * cc.h_prev.transpose();
  grads.b_i += da_i;
  grads.b_f += da_f;
  grads.b_o += da_o;
  grads.b_g += da_g;

  dx.noalias() = p.W_i.transpose() * da_i;
  dx.noalias() += p.W_f.transpose() * da_f;
  dx.noalias() += p.W_o.transpose() * da_o;
  dx.noalias() += p.W_g.transpose() * da_g;
  dh_prev.noalias() = p.U_i.transpose() * da_i;
  dh_prev.noalias() += p.U_f.transpose() * da_f;
  dh_prev.noalias() += p.U_o.transpose() * da_o;
  dh_prev.noalias() += p.U_g.transpose() * da_g;
}

}  // namespace mnr
