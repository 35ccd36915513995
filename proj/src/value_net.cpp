#include "gridrl/value_net.hpp"

#include "gridrl/rng.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace gridrl {

namespace {
constexpr int kW1Size = kHiddenDim * kInputDim;
constexpr int kW2Size = kHiddenDim * kHiddenDim;

bool finite_all(std::span<const double> v) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            return false;
        }
    }
    return true;
}
}  // namespace

NetParams NetParams::zeros() {
    NetParams p;
    p.w1.assign(kW1Size, 0.0);
    p.b1.assign(kHiddenDim, 0.0);
    p.w2.assign(kW2Size, 0.0);
    p.b2.assign(kHiddenDim, 0.0);
    p.w3.assign(kHiddenDim, 0.0);
    p.b3 = 0.0;
    return p;
}

bool NetParams::all_finite() const {
    return finite_all(w1) && finite_all(b1) && finite_all(w2) &&
           finite_all(b2) && finite_all(w3) && std::isfinite(b3);
}

InitResult init_params(std::uint64_t rng_seed) {
    Rng rng = Rng::stream(rng_seed, "init");
    NetParams p = NetParams::zeros();
    const double s1 = std::sqrt(6.0 / kInputDim);
    const double s2 = std::sqrt(6.0 / kHiddenDim);
    for (double& w : p.w1) {
        w = rng.uniform(-s1, s1);
    }
    for (double& w : p.w2) {
        w = rng.uniform(-s2, s2);
    }
    for (double& w : p.w3) {
        w = rng.uniform(-s2, s2);
    }
    return {std::move(p), AdamState{}};
}

double forward(const NetParams& p, const State& s, const State& g) {
    const auto x = encode_input(s, g);
    double v = 0.0;
    forward_batch(p, std::span<const double>(x.data(), kInputDim),
                  std::span<double>(&v, 1));
    return v;
}

void forward_batch(const NetParams& p, std::span<const double> inputs,
                   std::span<double> values_out) {
    const int n = static_cast<int>(values_out.size());
    std::vector<double> h1(kHiddenDim);
    std::vector<double> h2(kHiddenDim);
    for (int r = 0; r < n; ++r) {
        const double* x = inputs.data() + static_cast<std::size_t>(r) * kInputDim;
        for (int i = 0; i < kHiddenDim; ++i) {
            const double* w = p.w1.data() + i * kInputDim;
            double z = p.b1[i];
            for (int j = 0; j < kInputDim; ++j) {
                z += w[j] * x[j];
            }
            h1[i] = z > 0.0 ? z : 0.0;
        }
        for (int i = 0; i < kHiddenDim; ++i) {
            const double* w = p.w2.data() + i * kHiddenDim;
            double z = p.b2[i];
            for (int j = 0; j < kHiddenDim; ++j) {
                z += w[j] * h1[j];
            }
            h2[i] = z > 0.0 ? z : 0.0;
        }
        double y = p.b3;
        for (int i = 0; i < kHiddenDim; ++i) {
            y += p.w3[i] * h2[i];
        }
        if (!std::isfinite(y)) {
            throw NumericFault("non-finite network output");
        }
        values_out[r] = y;
    }
}

namespace {

// Gradients share the NetParams layout.
struct Workspace {
    std::vector<double> h1;   // n x kHiddenDim, post-rectifier
    std::vector<double> h2;   // n x kHiddenDim, post-rectifier
    std::vector<double> dz2;  // kHiddenDim scratch
    std::vector<double> dz1;  // kHiddenDim scratch

    void resize(int n) {
        h1.resize(static_cast<std::size_t>(n) * kHiddenDim);
        h2.resize(static_cast<std::size_t>(n) * kHiddenDim);
        dz2.resize(kHiddenDim);
        dz1.resize(kHiddenDim);
    }
};

// Forward pass over the batch, keeping hidden activations, then
// accumulate dLoss/dtheta for loss = (1/n) sum (v - target)^2. The
// rectifier subgradient at exactly zero is taken as zero (post-rect
// activation 0 gates the backward path).
double loss_and_grads(const NetParams& p, std::span<const TrainSample> batch,
                      NetParams& grads, Workspace& ws) {
    const int n = static_cast<int>(batch.size());
    ws.resize(n);
    grads = NetParams::zeros();

    double loss = 0.0;
    for (int r = 0; r < n; ++r) {
        const auto x = encode_input(batch[r].s, batch[r].g);
        double* h1 = ws.h1.data() + static_cast<std::size_t>(r) * kHiddenDim;
        double* h2 = ws.h2.data() + static_cast<std::size_t>(r) * kHiddenDim;
        for (int i = 0; i < kHiddenDim; ++i) {
            const double* w = p.w1.data() + i * kInputDim;
            double z = p.b1[i];
            for (int j = 0; j < kInputDim; ++j) {
                z += w[j] * x[j];
            }
            h1[i] = z > 0.0 ? z : 0.0;
        }
        for (int i = 0; i < kHiddenDim; ++i) {
            const double* w = p.w2.data() + i * kHiddenDim;
            double z = p.b2[i];
            for (int j = 0; j < kHiddenDim; ++j) {
                z += w[j] * h1[j];
            }
            h2[i] = z > 0.0 ? z : 0.0;
        }
        double y = p.b3;
        for (int i = 0; i < kHiddenDim; ++i) {
            y += p.w3[i] * h2[i];
        }

        const double residual = y - batch[r].target;
        loss += residual * residual;
        const double dy = 2.0 * residual / n;

        // Output layer.
        grads.b3 += dy;
        for (int i = 0; i < kHiddenDim; ++i) {
            grads.w3[i] += dy * h2[i];
        }
        // Layer 2: dz2 = (w3 * dy) gated by the rectifier.
        double* dz2 = ws.dz2.data();
        for (int i = 0; i < kHiddenDim; ++i) {
            dz2[i] = h2[i] > 0.0 ? p.w3[i] * dy : 0.0;
        }
        double* dz1 = ws.dz1.data();
        std::memset(dz1, 0, sizeof(double) * kHiddenDim);
        for (int i = 0; i < kHiddenDim; ++i) {
            const double d = dz2[i];
            if (d == 0.0) {
                continue;
            }
            grads.b2[i] += d;
            double* gw = grads.w2.data() + i * kHiddenDim;
            const double* w = p.w2.data() + i * kHiddenDim;
            for (int j = 0; j < kHiddenDim; ++j) {
                gw[j] += d * h1[j];
                dz1[j] += d * w[j];
            }
        }
        // Layer 1.
        for (int i = 0; i < kHiddenDim; ++i) {
            const double d = h1[i] > 0.0 ? dz1[i] : 0.0;
            if (d == 0.0) {
                continue;
            }
            grads.b1[i] += d;
            double* gw = grads.w1.data() + i * kInputDim;
            for (int j = 0; j < kInputDim; ++j) {
                gw[j] += d * x[j];
            }
        }
    }
    return loss / n;
}

void adam_update_tensor(std::span<double> theta, std::span<const double> g,
                        std::span<double> m, std::span<double> v,
                        const AdamState& a, double bc1, double bc2) {
    for (std::size_t i = 0; i < theta.size(); ++i) {
        m[i] = a.beta1 * m[i] + (1.0 - a.beta1) * g[i];
        v[i] = a.beta2 * v[i] + (1.0 - a.beta2) * g[i] * g[i];
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        theta[i] -= a.learning_rate * mhat / (std::sqrt(vhat) + a.epsilon);
    }
}

}  // namespace

double loss_gradients(const NetParams& p, std::span<const TrainSample> batch,
                      NetParams& grads) {
    if (batch.empty()) {
        throw std::invalid_argument("loss_gradients on empty batch");
    }
    Workspace ws;
    return loss_and_grads(p, batch, grads, ws);
}

double train_step(NetParams& p, AdamState& a,
                  std::span<const TrainSample> batch) {
    if (batch.empty()) {
        throw std::invalid_argument("train_step on empty batch");
    }
    for (const TrainSample& s : batch) {
        if (!std::isfinite(s.target)) {
            throw NumericFault("non-finite training target");
        }
    }

    thread_local Workspace ws;
    thread_local NetParams grads;
    const double loss = loss_and_grads(p, batch, grads, ws);
    if (!std::isfinite(loss) || !grads.all_finite()) {
        throw NumericFault("non-finite loss or gradient");
    }

    a.t += 1;
    const double bc1 = 1.0 - std::pow(a.beta1, static_cast<double>(a.t));
    const double bc2 = 1.0 - std::pow(a.beta2, static_cast<double>(a.t));
    adam_update_tensor(p.w1, grads.w1, a.m.w1, a.v.w1, a, bc1, bc2);
    adam_update_tensor(p.b1, grads.b1, a.m.b1, a.v.b1, a, bc1, bc2);
    adam_update_tensor(p.w2, grads.w2, a.m.w2, a.v.w2, a, bc1, bc2);
    adam_update_tensor(p.b2, grads.b2, a.m.b2, a.v.b2, a, bc1, bc2);
    adam_update_tensor(p.w3, grads.w3, a.m.w3, a.v.w3, a, bc1, bc2);
    adam_update_tensor(std::span<double>(&p.b3, 1),
                       std::span<const double>(&grads.b3, 1),
                       std::span<double>(&a.m.b3, 1),
                       std::span<double>(&a.v.b3, 1), a, bc1, bc2);

    if (!p.all_finite()) {
        throw NumericFault("non-finite parameters after update");
    }
    return loss;
}

namespace {

void write_tensor(std::ostream& out, const char* name,
                  std::span<const double> t, int rows, int cols) {
    out << "tensor " << name << ' ' << rows << ' ' << cols << '\n';
    char buf[40];
    for (std::size_t i = 0; i < t.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%a", t[i]);
        out << buf << '\n';
    }
}

void read_tensor(std::istream& in, const char* name, std::span<double> t,
                 int rows, int cols) {
    std::string tag, got_name;
    int got_rows = 0, got_cols = 0;
    in >> tag >> got_name >> got_rows >> got_cols;
    if (tag != "tensor" || got_name != name || got_rows != rows ||
        got_cols != cols) {
        throw std::runtime_error("checkpoint: bad header for tensor " +
                                 std::string(name));
    }
    std::string tok;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(in >> tok)) {
            throw std::runtime_error("checkpoint: truncated tensor " +
                                     std::string(name));
        }
        t[i] = std::strtod(tok.c_str(), nullptr);
    }
}

}  // namespace

void save_checkpoint(const NetParams& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write checkpoint " + path);
    }
    out << "gridrl-checkpoint v1\n";
    write_tensor(out, "w1", p.w1, kHiddenDim, kInputDim);
    write_tensor(out, "b1", p.b1, kHiddenDim, 1);
    write_tensor(out, "w2", p.w2, kHiddenDim, kHiddenDim);
    write_tensor(out, "b2", p.b2, kHiddenDim, 1);
    write_tensor(out, "w3", p.w3, kHiddenDim, 1);
    write_tensor(out, "b3", std::span<const double>(&p.b3, 1), 1, 1);
    if (!out) {
        throw std::runtime_error("write failed for checkpoint " + path);
    }
}

NetParams load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read checkpoint " + path);
    }
    std::string magic, version;
    in >> magic >> version;
    if (magic != "gridrl-checkpoint" || version != "v1") {
        throw std::runtime_error("not a checkpoint file: " + path);
    }
    NetParams p = NetParams::zeros();
    read_tensor(in, "w1", p.w1, kHiddenDim, kInputDim);
    read_tensor(in, "b1", p.b1, kHiddenDim, 1);
    read_tensor(in, "w2", p.w2, kHiddenDim, kHiddenDim);
    read_tensor(in, "b2", p.b2, kHiddenDim, 1);
    read_tensor(in, "w3", p.w3, kHiddenDim, 1);
    read_tensor(in, "b3", std::span<double>(&p.b3, 1), 1, 1);
    return p;
}

}  // namespace gridrl
