#include "epscap/spec_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "epscap/errors.hpp"

namespace epscap {

namespace {

using nlohmann::json;

constexpr double kFileSumTolerance = 1e-9;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw SpecParseError(path + ": " + what);
}

double number_at(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

std::vector<double> row_at(const json& j, const std::string& path, std::size_t expected_cols) {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of numbers");
    if (expected_cols != 0 && j.size() != expected_cols) {
        fail(path, "row has " + std::to_string(j.size()) + " entries, expected " +
                       std::to_string(expected_cols));
    }
    std::vector<double> row;
    row.reserve(j.size());
    for (std::size_t c = 0; c < j.size(); ++c) {
        const double v = number_at(j[c], path + "[" + std::to_string(c) + "]");
        if (v < 0.0 || !std::isfinite(v)) {
            fail(path + "[" + std::to_string(c) + "]", "entry must be a finite nonnegative number");
        }
        row.push_back(v);
    }
    return row;
}

}  // namespace

ChannelSpec parse_channel_spec_text(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SpecParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("$", "top-level value must be an object");
    if (!doc.contains("components")) fail("$", "missing \"components\"");
    const json& comps = doc["components"];
    if (!comps.is_array() || comps.empty()) fail("components", "expected a non-empty array");

    std::size_t nx = 0, ny = 0;
    std::vector<MixedChannel::Component> components;
    double weight_sum = 0.0;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const std::string base = "components[" + std::to_string(i) + "]";
        const json& c = comps[i];
        if (!c.is_object()) fail(base, "expected an object");
        if (!c.contains("weight")) fail(base, "missing \"weight\"");
        if (!c.contains("matrix")) fail(base, "missing \"matrix\"");
        const double w = number_at(c["weight"], base + ".weight");
        if (!(w > 0.0)) fail(base + ".weight", "weight must be strictly positive");
        weight_sum += w;

        const json& matrix = c["matrix"];
        if (!matrix.is_array() || matrix.empty()) {
            fail(base + ".matrix", "expected a non-empty array of rows");
        }
        if (i == 0) {
            nx = matrix.size();
        } else if (matrix.size() != nx) {
            fail(base + ".matrix", "input alphabet size " + std::to_string(matrix.size()) +
                                       " differs from component 0 (" + std::to_string(nx) + ")");
        }
        std::vector<double> row_major;
        for (std::size_t r = 0; r < matrix.size(); ++r) {
            const std::string rpath = base + ".matrix[" + std::to_string(r) + "]";
            std::vector<double> row = row_at(matrix[r], rpath, ny);
            if (i == 0 && r == 0) ny = row.size();
            if (row.size() != ny) {
                fail(rpath, "output alphabet size " + std::to_string(row.size()) +
                                " differs from earlier rows (" + std::to_string(ny) + ")");
            }
            double sum = 0.0;
            for (double v : row) sum += v;
            if (std::abs(sum - 1.0) > kFileSumTolerance) {
                std::ostringstream msg;
                msg << "row sums to " << sum << ", not 1 within 1e-9";
                fail(rpath, msg.str());
            }
            for (double& v : row) v /= sum;
            row_major.insert(row_major.end(), row.begin(), row.end());
        }
        components.push_back(MixedChannel::Component{w, Dmc(nx, ny, std::move(row_major))});
    }
    if (std::abs(weight_sum - 1.0) > kFileSumTolerance) {
        std::ostringstream msg;
        msg << "weights sum " << weight_sum << " != 1 (beyond the 1e-9 slack)";
        fail("components", msg.str());
    }
    for (auto& c : components) c.weight /= weight_sum;

    std::optional<std::vector<double>> cost;
    if (doc.contains("cost") && !doc["cost"].is_null()) {
        const json& jc = doc["cost"];
        if (!jc.is_array() || jc.size() != nx) {
            fail("cost", "expected an array with one entry per input symbol (" +
                             std::to_string(nx) + ")");
        }
        std::vector<double> c;
        for (std::size_t i = 0; i < jc.size(); ++i) {
            const double v = number_at(jc[i], "cost[" + std::to_string(i) + "]");
            if (!std::isfinite(v)) fail("cost[" + std::to_string(i) + "]", "must be finite");
            c.push_back(v);
        }
        cost = std::move(c);
    }

    ChannelSpec spec{MixedChannel(std::move(components), std::move(cost)), "", {}};
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) fail("name", "expected a string");
        spec.name = doc["name"].get<std::string>();
    }
    if (doc.contains("labels") && !doc["labels"].is_null()) {
        const json& jl = doc["labels"];
        if (!jl.is_array() || jl.size() != spec.channel.component_count()) {
            fail("labels", "expected one label per component");
        }
        for (std::size_t i = 0; i < jl.size(); ++i) {
            if (!jl[i].is_string()) fail("labels[" + std::to_string(i) + "]", "expected a string");
            spec.labels.push_back(jl[i].get<std::string>());
        }
    }
    return spec;
}

ChannelSpec parse_channel_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SpecParseError("cannot open channel spec file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_channel_spec_text(buf.str());
    } catch (const SpecParseError& e) {
        throw SpecParseError(path.string() + ": " + e.what());
    }
}

std::string serialize_channel_spec(const ChannelSpec& spec) {
    json doc = json::object();
    if (!spec.name.empty()) doc["name"] = spec.name;
    json comps = json::array();
    const MixedChannel& ch = spec.channel;
    for (std::size_t i = 0; i < ch.component_count(); ++i) {
        json c = json::object();
        c["weight"] = ch.weight(i);
        json matrix = json::array();
        for (std::size_t x = 0; x < ch.input_size(); ++x) {
            json row = json::array();
            for (std::size_t y = 0; y < ch.output_size(); ++y) row.push_back(ch.channel(i)(x, y));
            matrix.push_back(std::move(row));
        }
        c["matrix"] = std::move(matrix);
        comps.push_back(std::move(c));
    }
    doc["components"] = std::move(comps);
    if (ch.has_cost()) doc["cost"] = ch.cost();
    if (!spec.labels.empty()) doc["labels"] = spec.labels;
    return doc.dump(2) + "\n";
}

}  // namespace epscap
