#include "epscap/information.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace epscap {

namespace {
constexpr double kBitsPerNat = 1.4426950408889634;  // 1 / ln 2, the single base conversion
}

double mutual_information(const Distribution& input, const Dmc& channel) {
    if (input.size() != channel.input_size()) {
        throw std::invalid_argument("mutual_information: input law dimension mismatch");
    }
    const Distribution q = channel.output_law(input);
    double nats = 0.0;
    for (std::size_t x = 0; x < channel.input_size(); ++x) {
        const double px = input[x];
        if (px == 0.0) continue;
        for (std::size_t y = 0; y < channel.output_size(); ++y) {
            const double w = channel(x, y);
            if (w == 0.0) continue;
            nats += px * w * std::log(w / q[y]);
        }
    }
    return std::max(0.0, nats * kBitsPerNat);
}

std::vector<double> row_divergences_bits(const Dmc& channel, const Distribution& output_law) {
    if (output_law.size() != channel.output_size()) {
        throw std::invalid_argument("row_divergences_bits: output law dimension mismatch");
    }
    std::vector<double> d(channel.input_size(), 0.0);
    for (std::size_t x = 0; x < channel.input_size(); ++x) {
        double nats = 0.0;
        for (std::size_t y = 0; y < channel.output_size(); ++y) {
            const double w = channel(x, y);
            if (w == 0.0) continue;
            // q(y) = 0 with w > 0 means the input symbol is unreachable under
            // the current law; the divergence is +inf.
            if (output_law[y] == 0.0) {
                nats = std::numeric_limits<double>::infinity();
                break;
            }
            nats += w * std::log(w / output_law[y]);
        }
        d[x] = nats * kBitsPerNat;
    }
    return d;
}

InformationDensityTable::InformationDensityTable(const Distribution& input, const Dmc& channel) {
    if (input.size() != channel.input_size()) {
        throw std::invalid_argument("InformationDensityTable: input law dimension mismatch");
    }
    const Distribution q = channel.output_law(input);
    entries_.reserve(channel.input_size() * channel.output_size());
    double mean_nats = 0.0;
    for (std::size_t x = 0; x < channel.input_size(); ++x) {
        const double px = input[x];
        if (px == 0.0) continue;
        for (std::size_t y = 0; y < channel.output_size(); ++y) {
            const double w = channel(x, y);
            if (w == 0.0) continue;
            const double joint = px * w;
            const double value_nats = std::log(w / q[y]);
            entries_.push_back(Entry{value_nats * kBitsPerNat, joint, x, y});
            mean_nats += joint * value_nats;
        }
    }
    mean_ = mean_nats * kBitsPerNat;
    double var = 0.0;
    for (const Entry& e : entries_) {
        const double d = e.value_bits - mean_;
        var += e.joint_prob * d * d;
        max_abs_ = std::max(max_abs_, std::abs(e.value_bits));
    }
    variance_ = var;
}

ComponentCapacity component_capacity(const Dmc& channel, const ComponentCapacityOptions& opts) {
    if (!(opts.tol > 0.0)) throw std::invalid_argument("component_capacity: tol must be positive");
    const std::size_t nx = channel.input_size();

    ComponentCapacity best{0.0, std::numeric_limits<double>::infinity(),
                           Distribution::uniform(nx), false, 0};

    std::vector<double> p(nx, 1.0 / static_cast<double>(nx));
    std::vector<double> d(nx, 0.0);
    for (long it = 1; it <= opts.max_iterations; ++it) {
        const Distribution pd{std::vector<double>(p)};
        const Distribution q = channel.output_law(pd);
        d = row_divergences_bits(channel, q);

        double lower = 0.0;   // I(P; W) = sum_x P(x) D(W(.|x) || PW)
        double upper = 0.0;   // max_x D(W(.|x) || PW) >= C for any output law
        for (std::size_t x = 0; x < nx; ++x) {
            if (p[x] > 0.0) lower += p[x] * d[x];
            upper = std::max(upper, d[x]);
        }
        if (lower > best.bits) {
            best.bits = lower;
            best.input = pd;
        }
        best.upper_bound_bits = std::min(best.upper_bound_bits, upper);
        best.iterations = it;
        if (upper - lower <= opts.tol) {
            best.converged = true;
            break;
        }

        // Blahut-Arimoto multiplicative update p(x) <- p(x) 2^{D_x} / Z.
        double z = 0.0;
        for (std::size_t x = 0; x < nx; ++x) {
            p[x] = p[x] * std::exp2(d[x] - upper);  // shift by max for stability
            z += p[x];
        }
        for (std::size_t x = 0; x < nx; ++x) p[x] /= z;
    }
    best.bits = std::max(0.0, best.bits);
    best.upper_bound_bits = std::max(best.upper_bound_bits, best.bits);
    return best;
}

}  // namespace epscap
