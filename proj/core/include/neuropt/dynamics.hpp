#pragma once

#include <array>
#include <variant>

#include "neuropt/rng.hpp"
#include "neuropt/state.hpp"

namespace neuropt {

/// v' = A v
struct LinearModel
{
    std::array<std::array<double, 2>, 2> a{};

    double trace() const noexcept { return a[0][0] + a[1][1]; }
    double determinant() const noexcept { return a[0][0] * a[1][1] - a[0][1] * a[1][0]; }
};

/// Izhikevich neuron; defaults are the regular-spiking set.
struct IzhikevichModel
{
    double a = 0.02;
    double b = 0.2;
    double c = -65.0;
    double d = 8.0;
    double i_syn = 10.0;
};

/// Leaky integrate-and-fire membrane in component 0; component 1 is inert.
struct LIFModel
{
    double tau_m = 10.0;
    double v_rest = 0.0;
    double v_th = 1.0;
    double i_syn = 0.0;
};

using NeuronModel = std::variant<LinearModel, IzhikevichModel, LIFModel>;

enum class Integrator { Euler, RK4 };

/// Throws std::invalid_argument for non-finite parameters or tau_m <= 0.
void validate(const NeuronModel& model);

/// Continuous-time derivative of the model at v. The models are autonomous,
/// `t` is accepted for integrator uniformity.
NeuroState vector_field(const NeuronModel& model, const NeuroState& v, double t = 0.0);

/// Trace of the Jacobian at v; equals tr(A) for the linear model.
double jacobian_trace(const NeuronModel& model, const NeuroState& v);

/// Both steppers throw std::invalid_argument when dt <= 0 and NumericalError
/// when the result is not finite.
NeuroState euler_step(const NeuronModel& model, const NeuroState& v, double dt);
NeuroState rk4_step(const NeuronModel& model, const NeuroState& v, double dt);
NeuroState integrate_step(const NeuronModel& model, const NeuroState& v, double dt, Integrator method);

/// After-spike reset (c, u + d).
NeuroState izhikevich_reset(const IzhikevichModel& model, const NeuroState& v);

/// Stability classes for sampled linear cores.
enum class LinearClass { Random, StableNode, StableSpiral, UnstableNode, UnstableSpiral };

/// Random: entries uniform in [-2, 2]. Other classes place eigenvalues: real
/// pairs with magnitudes in [0.1, 2] for nodes, sigma +- i omega with
/// |sigma| in [0.1, 1] and omega in [0.5, 2] for spirals, then apply a random
/// rotation.
LinearModel sample_linear_model(LinearClass kind, Rng& rng);

} // namespace neuropt
