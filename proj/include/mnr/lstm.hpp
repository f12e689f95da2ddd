#pragma once

#include <Eigen/Core>
#include <vector>

#include "mnr/rng.hpp"

namespace mnr {

// One LSTM's parameters. Input weights are hidden_dim x input_dim so the
// forward pass is plain matrix * vector.
struct LstmParams {
  Eigen::MatrixXd W_i, W_f, W_o, W_g;
  Eigen::MatrixXd U_i, U_f, U_o, U_g;
  Eigen::VectorXd b_i, b_f, b_o, b_g;

  int input_dim() const { return static_cast<int>(W_i.cols()); }
  int hidden_dim() const { return static_cast<int>(W_i.rows()); }

  static LstmParams zeros(int d_in, int d_h);
  void init_uniform(double bound, Rng& rng);

  // Fixed traversal order, shared by serialization and the gradient checks.
  std::vector<const Eigen::MatrixXd*> weight_list() const;
  std::vector<Eigen::MatrixXd*> weight_list();
  std::vector<const Eigen::VectorXd*> bias_list() const;
  std::vector<Eigen::VectorXd*> bias_list();
};

// Activations saved by the forward step, consumed by the backward step.
struct LstmStepCache {
  Eigen::VectorXd x, h_prev, c_prev;
  Eigen::VectorXd i, f, o, g, c, tanh_c;
};

// Standard gated update: c' = f.*c + i.*g, h' = o.*tanh(c').
void lstm_step(const LstmParams& p, const Eigen::VectorXd& x, const Eigen::VectorXd& h,
               const Eigen::VectorXd& c, Eigen::VectorXd& h_out, Eigen::VectorXd& c_out,
               LstmStepCache* cache = nullptr);

struct LstmGrads {
  Eigen::MatrixXd W_i, W_f, W_o, W_g;
  Eigen::MatrixXd U_i, U_f, U_o, U_g;
  Eigen::VectorXd b_i, b_f, b_o, b_g;

  static LstmGrads zeros(int d_in, int d_h);
  double squared_norm() const;
  void scale(double s);
};

// Backpropagates one step. dh_out/dc_out are the gradients flowing into h'
// and c'; parameter gradients accumulate into `grads`.
void lstm_step_backward(const LstmParams& p, const LstmStepCache& cache,
                        const Eigen::VectorXd& dh_out, const Eigen::VectorXd& dc_out,
                        LstmGrads& grads, Eigen::VectorXd& dx, Eigen::VectorXd& dh_prev,
                        Eigen::VectorXd& dc_prev);

}  // namespace mnr
