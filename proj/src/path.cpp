#include "sconv/path.hpp"

#include "sconv/errors.hpp"

namespace sconv {

namespace {

void fill(const SequenceModel& m, std::int64_t horizon, RngStream rng, PathSample& out) {
    auto& v = out.values;
    v.resize(static_cast<std::size_t>(horizon));
    switch (m.kind) {
        case ModelKind::IidMean: {
            const auto mu = m.base.center();
            out.limit = mu.value_or(0.0);
            double s = 0.0;
            for (std::int64_t n = 1; n <= horizon; ++n) {
                s += m.base.sample(rng);
                v[static_cast<std::size_t>(n - 1)] = s / static_cast<double>(n);
            }
            return;
        }
        case ModelKind::ExplicitSpace: {
            if (m.example.name == ExampleName::Exa34) {
                out.limit = m.example.iid.sample(rng);
                for (auto& x : v) x = m.example.iid.sample(rng);
                return;
            }
            const double omega = rng.next_uniform();
            out.omega = omega;
            out.limit = 0.0;
            for (std::int64_t n = 1; n <= horizon; ++n) v[static_cast<std::size_t>(n - 1)] = eval_example(m.example, n, omega);
            return;
        }
        case ModelKind::Deterministic:
        case ModelKind::Perturbed: {
            out.limit = m.base.sample(rng);
            const bool fixed = m.noise.is_degenerate();
            for (std::int64_t n = 1; n <= horizon; ++n) {
                const double w = fixed ? m.noise.location : m.noise.sample(rng);
                const double a = m.scale.at(n);
                v[static_cast<std::size_t>(n - 1)] = a == 0.0 ? out.limit : out.limit + a * w;
            }
            return;
        }
        case ModelKind::Composed: {
            PathSample px, py;
            fill(*m.x, horizon, rng.substream(mix64(rng.stream_id() * 2 + 1)), px);
            fill(*m.y, horizon, rng.substream(mix64(rng.stream_id() * 2 + 2)), py);
            const double c = limit_law(*m.y).atoms().at(0).value;
            auto apply = [&](double a, double b) {
                switch (m.op) {
                    case ComposeOp::Sum: return a + b;
                    case ComposeOp::Product: return a * b;
                    case ComposeOp::Quotient: return a / b;
                }
                return a;
            };
            out.limit = apply(px.limit, c);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = apply(px.values[i], py.values[i]);
            return;
        }
    }
}

}  // namespace

PathSample sample_path(const SequenceModel& model, std::int64_t horizon, const RngStream& rng) {
    if (horizon < 1) throw PreconditionError("horizon must be >= 1");
    model.validate();
    PathSample out;
    out.model_id = model.id();
    out.seed = rng.seed();
    out.stream = rng.stream_id();
    out.horizon = horizon;
    fill(model, horizon, RngStream(rng.seed(), rng.stream_id()), out);
    return out;
}

PathSample explicit_path(const ExampleSpec& spec, std::int64_t horizon, double omega) {
    if (horizon < 1) throw PreconditionError("horizon must be >= 1");
    PathSample out;
    out.model_id = spec.id();
    out.horizon = horizon;
    out.omega = omega;
    out.values.resize(static_cast<std::size_t>(horizon));
    for (std::int64_t n = 1; n <= horizon; ++n) out.values[static_cast<std::size_t>(n - 1)] = eval_example(spec, n, omega);
    return out;
}

}  // namespace sconv
