#include "neuropt/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "neuropt/errors.hpp"

namespace neuropt {

namespace {

template <class... Ts>
struct overloaded : Ts...
{
    using Ts::operator()...;
};

bool finite_all(std::initializer_list<double> xs)
{
    for (double x : xs) {
        if (!std::isfinite(x))
            return false;
    }
    return true;
}

void check_dt(double dt)
{
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("integrator: dt must be positive and finite");
}

NeuroState checked(const NeuroState& v, const char* who)
{
    if (!is_finite(v))
        throw NumericalError(std::string(who) + ": state became non-finite");
    return v;
}

} // namespace

void validate(const NeuronModel& model)
{
    std::visit(overloaded{
                   [](const LinearModel& m) {
                       if (!finite_all({m.a[0][0], m.a[0][1], m.a[1][0], m.a[1][1]}))
                           throw std::invalid_argument("linear model: coefficients must be finite");
                   },
                   [](const IzhikevichModel& m) {
                       if (!finite_all({m.a, m.b, m.c, m.d, m.i_syn}))
                           throw std::invalid_argument("izhikevich model: parameters must be finite");
                   },
                   [](const LIFModel& m) {
                       if (!finite_all({m.tau_m, m.v_rest, m.v_th, m.i_syn}))
                           throw std::invalid_argument("lif model: parameters must be finite");
                       if (!(m.tau_m > 0.0))
                           throw std::invalid_argument("lif model: tau_m must be positive");
                   },
               },
               model);
}

NeuroState vector_field(const NeuronModel& model, const NeuroState& v, double /*t*/)
{
    return std::visit(overloaded{
                          [&](const LinearModel& m) -> NeuroState {
                              return {m.a[0][0] * v[0] + m.a[0][1] * v[1], m.a[1][0] * v[0] + m.a[1][1] * v[1]};
                          },
                          [&](const IzhikevichModel& m) -> NeuroState {
                              return {v[0] * v[0] / 25.0 + 5.0 * v[0] + 140.0 - v[1] + m.i_syn,
                                      m.a * (m.b * v[0] - v[1])};
                          },
                          [&](const LIFModel& m) -> NeuroState {
                              return {-(v[0] - m.v_rest + m.i_syn) / m.tau_m, 0.0};
                          },
                      },
                      model);
}

double jacobian_trace(const NeuronModel& model, const NeuroState& v)
{
    return std::visit(overloaded{
                          [](const LinearModel& m) { return m.trace(); },
                          [&](const IzhikevichModel& m) { return 2.0 * v[0] / 25.0 + 5.0 - m.a; },
                          [](const LIFModel& m) { return -1.0 / m.tau_m; },
                      },
                      model);
}

NeuroState euler_step(const NeuronModel& model, const NeuroState& v, double dt)
{
    check_dt(dt);
    return checked(v + dt * vector_field(model, v), "euler_step");
}

NeuroState rk4_step(const NeuronModel& model, const NeuroState& v, double dt)
{
    check_dt(dt);
    const NeuroState k1 = vector_field(model, v);
    const NeuroState k2 = vector_field(model, v + (0.5 * dt) * k1);
    const NeuroState k3 = vector_field(model, v + (0.5 * dt) * k2);
    const NeuroState k4 = vector_field(model, v + dt * k3);
    return checked(v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), "rk4_step");
}

NeuroState integrate_step(const NeuronModel& model, const NeuroState& v, double dt, Integrator method)
{
    return method == Integrator::Euler ? euler_step(model, v, dt) : rk4_step(model, v, dt);
}

NeuroState izhikevich_reset(const IzhikevichModel& model, const NeuroState& v)
{
    return {model.c, v[1] + model.d};
}

LinearModel sample_linear_model(LinearClass kind, Rng& rng)
{
    LinearModel m;
    if (kind == LinearClass::Random) {
        std::uniform_real_distribution<double> entry(-2.0, 2.0);
        for (auto& row : m.a)
            for (double& x : row)
                x = entry(rng);
        return m;
    }

    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    const double theta = angle(rng);
    const double c = std::cos(theta);
    const double s = std::sin(theta);

    std::array<std::array<double, 2>, 2> core{};
    if (kind == LinearClass::StableNode || kind == LinearClass::UnstableNode) {
        std::uniform_real_distribution<double> mag(0.1, 2.0);
        const double sign = kind == LinearClass::StableNode ? -1.0 : 1.0;
        core = {{{sign * mag(rng), 0.0}, {0.0, sign * mag(rng)}}};
    } else {
        std::uniform_real_distribution<double> re(0.1, 1.0);
        std::uniform_real_distribution<double> im(0.5, 2.0);
        const double sigma = (kind == LinearClass::StableSpiral ? -1.0 : 1.0) * re(rng);
        const double omega = im(rng);
        core = {{{sigma, omega}, {-omega, sigma}}};
    }

    // A = R core R^T
    const std::array<std::array<double, 2>, 2> r = {{{c, -s}, {s, c}}};
    std::array<std::array<double, 2>, 2> tmp{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            tmp[i][j] = r[i][0] * core[0][j] + r[i][1] * core[1][j];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            m.a[i][j] = tmp[i][0] * r[j][0] + tmp[i][1] * r[j][1];
    return m;
}

} // namespace neuropt
