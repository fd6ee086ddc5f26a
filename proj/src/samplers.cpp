#include "pdmp/samplers.hpp"

#include <cmath>

namespace pdmp {

namespace {

void check_common(const SamplerConfig& config) {
    if (config.target.dimension <= 0) throw ConfigError("sampler target has no dimension");
    if (!(config.alpha >= 0.0 && config.alpha <= 1.0))
        throw ConfigError("alpha must lie in [0, 1]");
    if (config.lambda_ref < 0.0) throw ConfigError("lambda_ref must be >= 0");
    if (!(config.zigzag_rate_scale > 0.0)) throw ConfigError("rate scale must be > 0");
}

void require_gradient(const SamplerConfig& config, const char* who) {
    if (!config.target.gradient)
        throw ConfigError(std::string(who) + " requires the target gradient");
}

// Bounce / reflection intensity <grad U(q), p>_+ along transport. Quadratic
// targets give the exact linear-in-time hazard a + b s with
//   a = <P (q - m), p>,  b = p' P p >= 0;
// otherwise the envelope  (<grad U(q), p> + tau L_U ||p||^2)_+  dominates the
// window [0, tau] by Lipschitz continuity of grad U.
IntensityFunction directional_intensity(const Potential& target, double lookahead) {
    auto grad = target.gradient;
    const int n = target.dimension;
    auto rate = [grad, n](const Vector& z) {
        return std::max(0.0, grad(z.head(n)).dot(z.tail(n)));
    };
    if (target.quadratic) {
        const Matrix prec = target.precision;
        const Vector mean = target.gauss_mean;
        return IntensityFunction::linear_hazard(rate, [prec, mean, n](const Vector& z) {
            const Vector q = z.head(n), p = z.tail(n);
            return std::pair<double, double>{(prec * (q - mean)).dot(p), p.dot(prec * p)};
        });
    }
    const double lip = target.gradient_lipschitz;
    auto envelope = [grad, lip, n](const Vector& z, double tau) {
        const Vector q = z.head(n), p = z.tail(n);
        return std::max(0.0, grad(q).dot(p) + tau * lip * p.squaredNorm());
    };
    return IntensityFunction::thinned(rate, envelope, lookahead);
}

}  // namespace

SamplerVariant parse_sampler_variant(const std::string& name) {
    if (name == "zigzag") return SamplerVariant::zigzag;
    if (name == "bps") return SamplerVariant::bps;
    if (name == "rhmc") return SamplerVariant::rhmc;
    if (name == "pure_reflection") return SamplerVariant::pure_reflection;
    if (name == "lambda_zero") return SamplerVariant::lambda_zero;
    throw ConfigError("unknown sampler variant '" + name + "'");
}

std::string sampler_variant_name(SamplerVariant variant) {
    switch (variant) {
        case SamplerVariant::zigzag: return "zigzag";
        case SamplerVariant::bps: return "bps";
        case SamplerVariant::rhmc: return "rhmc";
        case SamplerVariant::pure_reflection: return "pure_reflection";
        case SamplerVariant::lambda_zero: return "lambda_zero";
    }
    return "?";
}

PdmpSpec build_zigzag(const SamplerConfig& config) {
    check_common(config);
    require_gradient(config, "zigzag");
    const int n = config.target.dimension;
    const double scale = config.zigzag_rate_scale;
    auto grad = config.target.gradient;

    PdmpSpec spec;
    spec.dimension = 2 * n;
    spec.flow = Flow::linear_transport(2 * n);
    for (int i = 0; i < n; ++i) {
        auto rate = [grad, scale, n, i](const Vector& z) {
            return scale * std::max(0.0, z[n + i] * grad(z.head(n))[i]);
        };
        IntensityFunction intensity;
        if (config.target.quadratic) {
            const Matrix prec = config.target.precision;
            const Vector mean = config.target.gauss_mean;
            intensity = IntensityFunction::linear_hazard(
                rate, [prec, mean, scale, n, i](const Vector& z) {
                    const Vector q = z.head(n), p = z.tail(n);
                    const double a = p[i] * (prec.row(i) * (q - mean))(0);
                    const double b = p[i] * (prec.row(i) * p)(0);
                    return std::pair<double, double>{scale * a, scale * b};
                });
        } else {
            const double lip = config.target.gradient_lipschitz;
            intensity = IntensityFunction::thinned(
                rate,
                [grad, lip, scale, n, i](const Vector& z, double tau) {
                    const Vector q = z.head(n), p = z.tail(n);
                    const double drift = std::abs(p[i]) * lip * p.norm();
                    return scale * std::max(0.0, p[i] * grad(q)[i] + tau * drift);
                },
                config.thinning_lookahead);
        }
        spec.clocks.push_back({std::move(intensity), coordinate_flip_kernel(i)});
    }
    return spec;
}

PdmpSpec build_bps(const SamplerConfig& config) {
    check_common(config);
    require_gradient(config, "bps");
    if (config.alpha < 1.0 && !(config.lambda_ref > 0.0))
        throw ConfigError("bps with alpha < 1 requires lambda_ref > 0");
    const int n = config.target.dimension;

    PdmpSpec spec;
    spec.dimension = 2 * n;
    spec.flow = Flow::linear_transport(2 * n);
    spec.clocks.push_back({directional_intensity(config.target, config.thinning_lookahead),
                           bps_bounce_kernel(config.target.gradient, config.target.hessian)});
    if (config.lambda_ref > 0.0)
        spec.clocks.push_back({IntensityFunction::constant(config.lambda_ref),
                               autoregressive_kernel(n, config.alpha)});
    return spec;
}

PdmpSpec build_rhmc(const SamplerConfig& config) {
    check_common(config);
    require_gradient(config, "rhmc");
    if (!(config.lambda_ref > 0.0)) throw ConfigError("rhmc requires lambda_ref > 0");
    const int n = config.target.dimension;

    PdmpSpec spec;
    spec.dimension = 2 * n;
    if (config.target.is_standard_gaussian()) {
        spec.flow = Flow::harmonic(2 * n);
    } else {
        auto grad = config.target.gradient;
        auto g = [grad, n](const Vector& z) {
            Vector out(z.size());
            out.head(n) = z.tail(n);
            out.tail(n) = -grad(z.head(n));
            return out;
        };
        std::function<Matrix(const Vector&)> dg;
        if (config.target.hessian) {
            auto hess = config.target.hessian;
            dg = [hess, n](const Vector& z) {
                Matrix j = Matrix::Zero(2 * n, 2 * n);
                j.topRightCorner(n, n) = Matrix::Identity(n, n);
                j.bottomLeftCorner(n, n) = -hess(z.head(n));
                return j;
            };
        }
        // ||Dg|| = max(1, ||hess U||) for the kinetic block structure.
        spec.flow = Flow::numeric(g, std::max(1.0, config.target.gradient_lipschitz), dg);
    }
    spec.clocks.push_back({IntensityFunction::constant(config.lambda_ref),
                           autoregressive_kernel(n, config.alpha)});
    return spec;
}

PdmpSpec build_pure_reflection(const SamplerConfig& config) {
    check_common(config);
    require_gradient(config, "pure_reflection");
    const int n = config.target.dimension;

    PdmpSpec spec;
    spec.dimension = 2 * n;
    spec.flow = Flow::linear_transport(2 * n);
    spec.clocks.push_back({directional_intensity(config.target, config.thinning_lookahead),
                           pure_reflection_kernel()});
    return spec;
}

PdmpSpec build_lambda_zero(const SamplerConfig& config) {
    check_common(config);
    PdmpSpec spec;
    spec.dimension = 2 * config.target.dimension;
    spec.flow = Flow::linear_transport(spec.dimension);
    spec.clocks.push_back({IntensityFunction::constant(0.0), identity_kernel()});
    return spec;
}

PdmpSpec build_sampler(const SamplerConfig& config) {
    switch (config.variant) {
        case SamplerVariant::zigzag: return build_zigzag(config);
        case SamplerVariant::bps: return build_bps(config);
        case SamplerVariant::rhmc: return build_rhmc(config);
        case SamplerVariant::pure_reflection: return build_pure_reflection(config);
        case SamplerVariant::lambda_zero: return build_lambda_zero(config);
    }
    throw ConfigError("unknown sampler variant");
}

}  // namespace pdmp
