#include "sigstate/nn/layers.hpp"

#include <cmath>

namespace sigstate::nn {

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& scores) {
  Eigen::MatrixXd out(scores.rows(), scores.cols());
  for (Index t = 0; t < scores.rows(); ++t) {
    double m = scores.row(t).maxCoeff();
    Eigen::RowVectorXd e = (scores.row(t).array() - m).exp();
    out.row(t) = e / e.sum();
  }
  return out;
}

Eigen::MatrixXd relu(const Eigen::MatrixXd& x) { return x.cwiseMax(0.0); }

Eigen::MatrixXd leaky_relu(const Eigen::MatrixXd& x, double slope) {
  return x.unaryExpr([slope](double v) { return v >= 0.0 ? v : slope * v; });
}

void glorot_init(Eigen::MatrixXd& w, Index fan_in, Index fan_out,
                 std::mt19937_64& rng) {
  double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (Index i = 0; i < w.rows(); ++i)
    for (Index j = 0; j < w.cols(); ++j) w(i, j) = dist(rng);
}

// ---------------------------------------------------------------------------
// Conv1dLayer

Conv1dLayer::Conv1dLayer(std::string name, Index in_channels, Index out_channels,
                         Index kernel, bool apply_relu)
    : in_c_(in_channels), out_c_(out_channels), kernel_(kernel), relu_(apply_relu) {
  if (in_c_ < 1 || out_c_ < 1 || kernel_ < 1)
    throw ValidationError("conv1d: channels and kernel must be >= 1");
  weight_.name = name + ".weight";
  weight_.value.setZero(kernel_ * in_c_, out_c_);
  bias_.name = name + ".bias";
  bias_.value.setZero(1, out_c_);
  weight_.zero_grad();
  bias_.zero_grad();
}

void Conv1dLayer::init(std::mt19937_64& rng) {
  glorot_init(weight_.value, kernel_ * in_c_, out_c_, rng);
  bias_.value.setZero();
}

Eigen::MatrixXd Conv1dLayer::forward(const Eigen::MatrixXd& input) {
  if (input.cols() != in_c_)
    throw ShapeError("conv1d: expected " + std::to_string(in_c_) + " channels, got " +
                     std::to_string(input.cols()));
  const Index l = input.rows();
  const Index offset = kernel_ / 2;
  cols_.setZero(l, kernel_ * in_c_);
  for (Index k = 0; k < kernel_; ++k) {
    const Index shift = k - offset;  // source row = t + shift
    const Index t_begin = std::max<Index>(0, -shift);
    const Index t_end = std::min<Index>(l, l - shift);
    if (t_end <= t_begin) continue;
    cols_.block(t_begin, k * in_c_, t_end - t_begin, in_c_) =
        input.middleRows(t_begin + shift, t_end - t_begin);
  }
  Eigen::MatrixXd out = cols_ * weight_.value;
  out.rowwise() += bias_.value.row(0);
  if (relu_) {
    preact_ = out;
    out = out.cwiseMax(0.0);
  }
  return out;
}

Eigen::MatrixXd Conv1dLayer::backward(const Eigen::MatrixXd& grad_output) {
  if (grad_output.cols() != out_c_ || grad_output.rows() != cols_.rows())
    throw ShapeError("conv1d backward: gradient shape mismatch");
  Eigen::MatrixXd grad_pre = grad_output;
  if (relu_) {
    grad_pre.array() *= (preact_.array() > 0.0).cast<double>();
  }
  weight_.grad.noalias() += cols_.transpose() * grad_pre;
  bias_.grad.row(0) += grad_pre.colwise().sum();

  Eigen::MatrixXd grad_cols = grad_pre * weight_.value.transpose();
  const Index l = grad_output.rows();
  const Index offset = kernel_ / 2;
  Eigen::MatrixXd grad_in = Eigen::MatrixXd::Zero(l, in_c_);
  for (Index k = 0; k < kernel_; ++k) {
    const Index shift = k - offset;
    const Index t_begin = std::max<Index>(0, -shift);
    const Index t_end = std::min<Index>(l, l - shift);
    if (t_end <= t_begin) continue;
    grad_in.middleRows(t_begin + shift, t_end - t_begin) +=
        grad_cols.block(t_begin, k * in_c_, t_end - t_begin, in_c_);
  }
  return grad_in;
}

// ---------------------------------------------------------------------------
// GruLayer

GruLayer::GruLayer(std::string name, Index in_channels, Index hidden)
    : in_c_(in_channels), hidden_(hidden) {
  if (in_c_ < 1 || hidden_ < 1)
    throw ValidationError("gru: channels and hidden size must be >= 1");
  auto setup = [&](ParamTensor& p, const std::string& suffix, Index rows, Index cols) {
    p.name = name + "." + suffix;
    p.value.setZero(rows, cols);
    p.zero_grad();
  };
  setup(wz_, "wz", in_c_, hidden_);
  setup(uz_, "uz", hidden_, hidden_);
  setup(bz_, "bz", 1, hidden_);
  setup(wr_, "wr", in_c_, hidden_);
  setup(ur_, "ur", hidden_, hidden_);
  setup(br_, "br", 1, hidden_);
  setup(wh_, "wh", in_c_, hidden_);
  setup(uh_, "uh", hidden_, hidden_);
  setup(bh_, "bh", 1, hidden_);
}

void GruLayer::init(std::mt19937_64& rng) {
  glorot_init(wz_.value, in_c_, hidden_, rng);
  glorot_init(uz_.value, hidden_, hidden_, rng);
  bz_.value.setZero();
  glorot_init(wr_.value, in_c_, hidden_, rng);
  glorot_init(ur_.value, hidden_, hidden_, rng);
  br_.value.setZero();
  glorot_init(wh_.value, in_c_, hidden_, rng);
  glorot_init(uh_.value, hidden_, hidden_, rng);
  bh_.value.setZero();
}

std::vector<ParamTensor*> GruLayer::params() {
  return {&wz_, &uz_, &bz_, &wr_, &ur_, &br_, &wh_, &uh_, &bh_};
}

namespace {
inline Eigen::RowVectorXd sigmoid(const Eigen::RowVectorXd& x) {
  return ((-x.array()).exp() + 1.0).inverse();
}
}  // namespace

Eigen::MatrixXd GruLayer::forward(const Eigen::MatrixXd& input) {
  if (input.cols() != in_c_)
    throw ShapeError("gru: expected " + std::to_string(in_c_) + " channels, got " +
                     std::to_string(input.cols()));
  const Index l = input.rows();
  x_ = input;
  // Input projections for all gates in one pass each.
  Eigen::MatrixXd pz = input * wz_.value;
  pz.rowwise() += bz_.value.row(0);
  Eigen::MatrixXd pr = input * wr_.value;
  pr.rowwise() += br_.value.row(0);
  Eigen::MatrixXd ph = input * wh_.value;
  ph.rowwise() += bh_.value.row(0);

  z_.resize(l, hidden_);
  r_.resize(l, hidden_);
  c_.resize(l, hidden_);
  h_.resize(l, hidden_);
  Eigen::RowVectorXd h_prev = Eigen::RowVectorXd::Zero(hidden_);
  for (Index t = 0; t < l; ++t) {
    Eigen::RowVectorXd z = sigmoid(pz.row(t) + h_prev * uz_.value);
    Eigen::RowVectorXd r = sigmoid(pr.row(t) + h_prev * ur_.value);
    Eigen::RowVectorXd c =
        (ph.row(t) + (r.cwiseProduct(h_prev)) * uh_.value).array().tanh();
    Eigen::RowVectorXd h =
        (1.0 - z.array()).matrix().cwiseProduct(h_prev) + z.cwiseProduct(c);
    z_.row(t) = z;
    r_.row(t) = r;
    c_.row(t) = c;
    h_.row(t) = h;
    h_prev = h;
  }
  return h_;
}

Eigen::MatrixXd GruLayer::backward(const Eigen::MatrixXd& grad_output) {
  const Index l = x_.rows();
  if (grad_output.rows() != l || grad_output.cols() != hidden_)
    throw ShapeError("gru backward: gradient shape mismatch");

  Eigen::MatrixXd daz(l, hidden_), dar(l, hidden_), dah(l, hidden_);
  Eigen::RowVectorXd carry = Eigen::RowVectorXd::Zero(hidden_);
  for (Index t = l - 1; t >= 0; --t) {
    Eigen::RowVectorXd h_prev =
        t > 0 ? Eigen::RowVectorXd(h_.row(t - 1)) : Eigen::RowVectorXd::Zero(hidden_);
    Eigen::RowVectorXd dh = grad_output.row(t) + carry;
    Eigen::RowVectorXd z = z_.row(t), r = r_.row(t), c = c_.row(t);

    Eigen::RowVectorXd dz = dh.cwiseProduct(c - h_prev);
    Eigen::RowVectorXd da_z =
        dz.cwiseProduct(z.cwiseProduct((1.0 - z.array()).matrix()));
    Eigen::RowVectorXd dc = dh.cwiseProduct(z);
    Eigen::RowVectorXd da_h =
        dc.cwiseProduct((1.0 - c.array().square()).matrix());

    carry = dh.cwiseProduct((1.0 - z.array()).matrix());
    carry.noalias() += da_z * uz_.value.transpose();
    Eigen::RowVectorXd drh = da_h * uh_.value.transpose();
    Eigen::RowVectorXd dr = drh.cwiseProduct(h_prev);
    carry += drh.cwiseProduct(r);
    Eigen::RowVectorXd da_r =
        dr.cwiseProduct(r.cwiseProduct((1.0 - r.array()).matrix()));
    carry.noalias() += da_r * ur_.value.transpose();

    daz.row(t) = da_z;
    dar.row(t) = da_r;
    dah.row(t) = da_h;
  }

  // Shifted hidden states: row t holds h_{t-1} (zeros at t = 0).
  Eigen::MatrixXd h_prev_all = Eigen::MatrixXd::Zero(l, hidden_);
  if (l > 1) h_prev_all.bottomRows(l - 1) = h_.topRows(l - 1);

  wz_.grad.noalias() += x_.transpose() * daz;
  uz_.grad.noalias() += h_prev_all.transpose() * daz;
  bz_.grad.row(0) += daz.colwise().sum();
  wr_.grad.noalias() += x_.transpose() * dar;
  ur_.grad.noalias() += h_prev_all.transpose() * dar;
  br_.grad.row(0) += dar.colwise().sum();
  wh_.grad.noalias() += x_.transpose() * dah;
  uh_.grad.noalias() += (r_.cwiseProduct(h_prev_all)).transpose() * dah;
  bh_.grad.row(0) += dah.colwise().sum();

  Eigen::MatrixXd grad_in = daz * wz_.value.transpose();
  grad_in.noalias() += dar * wr_.value.transpose();
  grad_in.noalias() += dah * wh_.value.transpose();
  return grad_in;
}

// ---------------------------------------------------------------------------
// DenseLayer

DenseLayer::DenseLayer(std::string name, Index in_channels, Index out_channels,
                       Activation activation, double leaky_slope)
    : in_c_(in_channels), out_c_(out_channels), act_(activation), slope_(leaky_slope) {
  if (in_c_ < 1 || out_c_ < 1)
    throw ValidationError("dense: channels must be >= 1");
  weight_.name = name + ".weight";
  weight_.value.setZero(in_c_, out_c_);
  bias_.name = name + ".bias";
  bias_.value.setZero(1, out_c_);
  weight_.zero_grad();
  bias_.zero_grad();
}

void DenseLayer::init(std::mt19937_64& rng) {
  glorot_init(weight_.value, in_c_, out_c_, rng);
  bias_.value.setZero();
}

Eigen::MatrixXd DenseLayer::forward(const Eigen::MatrixXd& input) {
  if (input.cols() != in_c_)
    throw ShapeError("dense: expected " + std::to_string(in_c_) + " inputs, got " +
                     std::to_string(input.cols()));
  x_ = input;
  pre_ = input * weight_.value;
  pre_.rowwise() += bias_.value.row(0);
  switch (act_) {
    case Activation::none:
      out_ = pre_;
      break;
    case Activation::leaky_relu:
      out_ = leaky_relu(pre_, slope_);
      break;
    case Activation::softmax:
      out_ = softmax_rows(pre_);
      break;
  }
  return out_;
}

Eigen::MatrixXd DenseLayer::backward(const Eigen::MatrixXd& grad_output) {
  if (grad_output.rows() != pre_.rows() || grad_output.cols() != out_c_)
    throw ShapeError("dense backward: gradient shape mismatch");
  Eigen::MatrixXd grad_pre;
  switch (act_) {
    case Activation::none:
      grad_pre = grad_output;
      break;
    case Activation::leaky_relu:
      grad_pre = grad_output.cwiseProduct(pre_.unaryExpr(
          [this](double v) { return v >= 0.0 ? 1.0 : slope_; }));
      break;
    case Activation::softmax: {
      grad_pre.resize(grad_output.rows(), out_c_);
      for (Index t = 0; t < grad_output.rows(); ++t) {
        double dot = grad_output.row(t).dot(out_.row(t));
        grad_pre.row(t) = out_.row(t).cwiseProduct(
            (grad_output.row(t).array() - dot).matrix());
      }
      break;
    }
  }
  weight_.grad.noalias() += x_.transpose() * grad_pre;
  bias_.grad.row(0) += grad_pre.colwise().sum();
  return grad_pre * weight_.value.transpose();
}

}  // namespace sigstate::nn
