#include "news/news_params.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace news {

NetworkDefaults NetworkDefaults::from(const StreetNetwork& network, double gamma) {
  NetworkDefaults d;
  const auto& streets = network.streets();
  if (streets.empty()) {
    // Isolated intersections: nothing can move, but parameters must stay valid.
    d.v_max = 1.0;
    d.rho_max = 1.0 / kJamSpacing;
    d.rho_crit = gamma * d.rho_max;
    d.length = 1.0;
    return d;
  }
  for (const auto& s : streets) {
    d.v_max += s.v_max;
    d.rho_max += s.rho_max();
    d.length += s.length;
  }
  const double n = static_cast<double>(streets.size());
  d.v_max /= n;
  d.rho_max /= n;
  d.rho_crit = gamma * d.rho_max;
  d.length /= n;
  return d;
}

StreetPairMatrix supply_ratios(const StreetNetwork& network, std::size_t k, double gamma) {
  const auto& table = network.turning(k);
  StreetPairMatrix beta;
  beta.rows = table.incoming().size();
  beta.cols = table.outgoing().size();
  beta.values.assign(beta.rows * beta.cols, 0.0);
  for (std::size_t c = 0; c < beta.cols; ++c) {
    double feed = 0.0;
    for (std::size_t r = 0; r < beta.rows; ++r)
      feed += table(r, c) * network.street(table.incoming()[r]).capacity(gamma);
    if (feed <= 0.0) continue;  // no feeder: column stays zero
    for (std::size_t r = 0; r < beta.rows; ++r)
      beta.values[r * beta.cols + c] =
          table(r, c) * network.street(table.incoming()[r]).capacity(gamma) / feed;
  }
  return beta;
}

CardinalTurning cardinal_turning(const StreetNetwork& network, std::size_t k,
                                 const StreetPairMatrix& beta, const ParamOptions& options) {
  const auto& table = network.turning(k);
  const auto& in = table.incoming();
  const auto& out = table.outgoing();

  std::vector<PerCardinal<double>> p_in(in.size()), p_out(out.size());
  std::vector<double> cap_in(in.size()), cap_out(out.size());
  for (std::size_t r = 0; r < in.size(); ++r) {
    p_in[r] = projection_coeffs(network.street(in[r]).direction);
    cap_in[r] = network.street(in[r]).capacity(options.gamma);
  }
  for (std::size_t c = 0; c < out.size(); ++c) {
    p_out[c] = projection_coeffs(network.street(out[c]).direction);
    cap_out[c] = network.street(out[c]).capacity(options.gamma);
  }

  CardinalTurning result;
  for (auto from : kCardinals) {
    const std::size_t x = index(from);
    double in_mass = 0.0;
    for (std::size_t r = 0; r < in.size(); ++r) in_mass += p_in[r][x] * cap_in[r];
    for (auto to : kCardinals) {
      const std::size_t y = index(to);
      if (in_mass >= options.epsilon) {
        double num = 0.0;
        for (std::size_t c = 0; c < out.size(); ++c) {
          double inner = 0.0;
          for (std::size_t r = 0; r < in.size(); ++r)
            inner += table(r, c) * p_in[r][x] * cap_in[r];
          num += p_out[c][y] * inner;
        }
        result.alpha[x][y] = num / in_mass;
      }
      double out_mass = 0.0;
      for (std::size_t c = 0; c < out.size(); ++c) out_mass += p_out[c][y] * cap_out[c];
      if (out_mass >= options.epsilon) {
        double num = 0.0;
        for (std::size_t r = 0; r < in.size(); ++r) {
          double inner = 0.0;
          for (std::size_t c = 0; c < out.size(); ++c)
            inner += beta(r, c) * p_out[c][y] * cap_out[c];
          num += p_in[r][x] * inner;
        }
        result.beta[x][y] = num / out_mass;
      }
    }
  }
  return result;
}

CardinalAggregates cardinal_aggregates(const StreetNetwork& network, std::size_t k,
                                       const ParamOptions& options,
                                       const NetworkDefaults& defaults) {
  const double gamma = options.gamma;
  CardinalAggregates agg;
  PerCardinal<double> trig_mass{}, speed_mass{};
  double length_num = 0.0, length_den = 0.0;

  for (std::size_t s : network.outgoing(k)) {
    const auto& st = network.street(s);
    const auto p = projection_coeffs(st.direction);
    const auto trig = street_trig(st.direction);
    const double cap = st.capacity(gamma);
    for (auto d : kCardinals) {
      const std::size_t x = index(d);
      agg.cos_bar[x] += p[x] * trig.cos * cap;
      agg.sin_bar[x] += p[x] * trig.sin * cap;
      trig_mass[x] += p[x] * cap;
    }
    length_num += st.rho_max() * st.length;
    length_den += st.rho_max();
  }

  auto accumulate_density = [&](std::size_t s) {
    const auto& st = network.street(s);
    const auto p = projection_coeffs(st.direction);
    for (auto d : kCardinals) {
      const std::size_t x = index(d);
      agg.rho_max[x] += p[x] * st.rho_max();
      agg.rho_crit[x] += p[x] * st.rho_crit(gamma);
      speed_mass[x] += p[x] * st.v_max * st.rho_crit(gamma);
    }
  };
  for (std::size_t s : network.incoming(k)) accumulate_density(s);
  for (std::size_t s : network.outgoing(k)) accumulate_density(s);

  for (auto d : kCardinals) {
    const std::size_t x = index(d);
    if (trig_mass[x] >= options.epsilon) {
      agg.cos_bar[x] /= trig_mass[x];
      agg.sin_bar[x] /= trig_mass[x];
    } else {
      agg.cos_bar[x] = 0.0;
      agg.sin_bar[x] = 0.0;
    }
    if (agg.rho_crit[x] >= options.epsilon) {
      agg.v_max[x] = speed_mass[x] / agg.rho_crit[x];
    } else {
      agg.v_max[x] = defaults.v_max;
      agg.rho_max[x] = defaults.rho_max;
      agg.rho_crit[x] = defaults.rho_crit;
      agg.defaulted[x] = true;
    }
  }
  agg.length = length_den > 0.0 ? length_num / length_den : defaults.length;
  return agg;
}

namespace {

// Adds p[x] * value to target[x]; an infinite value only reaches directions
// with positive weight.
void add_projected(PerCardinal<double>& target, const PerCardinal<double>& p, double value) {
  for (std::size_t x = 0; x < 4; ++x) {
    if (p[x] == 0.0) continue;
    target[x] += p[x] * value;
  }
}

}  // namespace

IoProjection project_io_demand(const StreetNetwork& network, std::size_t /*k*/,
                               std::span<const StreetFlow> sources,
                               std::span<const StreetFlow> sinks) {
  IoProjection io;
  for (const auto& f : sources)
    add_projected(io.source_demand, projection_coeffs(network.street(f.street).direction),
                  f.value);
  for (const auto& f : sinks)
    add_projected(io.sink_supply, projection_coeffs(network.street(f.street).direction),
                  f.value);
  return io;
}

std::vector<NewsIntersectionParams> compile_params(const StreetNetwork& network,
                                                   const ParamOptions& options) {
  const auto defaults = NetworkDefaults::from(network, options.gamma);
  std::vector<NewsIntersectionParams> params(network.intersections().size());
  for (std::size_t k = 0; k < params.size(); ++k) {
    params[k].aggregates = cardinal_aggregates(network, k, options, defaults);
    params[k].turning =
        cardinal_turning(network, k, supply_ratios(network, k, options.gamma), options);
  }
  return params;
}

void write_params_table(std::ostream& out, const StreetNetwork& network,
                        const std::vector<NewsIntersectionParams>& params) {
  const auto old_precision = out.precision(12);
  out << "id,x,y,L";
  for (auto d : kCardinals) {
    const char c = cardinal_name(d);
    out << ",cos_" << c << ",sin_" << c << ",vmax_" << c << ",rhomax_" << c << ",rhocrit_"
        << c;
  }
  for (const char* kind : {"alpha", "beta"})
    for (auto a : kCardinals)
      for (auto b : kCardinals) out << ',' << kind << '_' << cardinal_name(a) << cardinal_name(b);
  out << '\n';
  for (std::size_t k = 0; k < params.size(); ++k) {
    const auto& node = network.intersection(k);
    const auto& agg = params[k].aggregates;
    out << node.id << ',' << node.position.x << ',' << node.position.y << ',' << agg.length;
    for (auto d : kCardinals) {
      const std::size_t x = index(d);
      out << ',' << agg.cos_bar[x] << ',' << agg.sin_bar[x] << ',' << agg.v_max[x] << ','
          << agg.rho_max[x] << ',' << agg.rho_crit[x];
    }
    for (const auto* m : {&params[k].turning.alpha, &params[k].turning.beta})
      for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) out << ',' << (*m)[a][b];
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace news
