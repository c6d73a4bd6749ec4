#include "wsnsis/model.hpp"

#include "wsnsis/error.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>

namespace wsnsis {

void ModelParams::validate() const {
    const std::array<std::pair<const char*, double>, 4> fields{
        {{"beta", beta}, {"gamma", gamma}, {"u", u}, {"v", v}}};
    for (auto [name, value] : fields) {
        if (!(value >= 0.0 && value <= 1.0)) {
            throw ValidationError(std::string(name) + " = " + format_double(value) + " is outside [0, 1]");
        }
    }
    if (u == 0.0 && v == 0.0) {
        throw DegenerateSchedulingError("u = v = 0: sleep schedule has no stationary split");
    }
}

double stationary_active_fraction(const ModelParams& params) {
    if (!(params.u + params.v > 0.0)) {
        throw DegenerateSchedulingError("u = v = 0: sleep schedule has no stationary split");
    }
    return params.v / (params.u + params.v);
}

Fractions tail_average(const FractionSeries& series, std::size_t window) {
    Fractions mean;
    if (series.rows.empty()) return mean;
    const std::size_t t_last = series.rows.back().t;
    std::size_t count = 0;
    for (const auto& row : series.rows) {
        if (window != 0 && row.t + window <= t_last) continue;
        if (window == 0 && row.t != t_last) continue;
        mean.us += row.rho.us;
        mean.as += row.rho.as;
        mean.ui += row.rho.ui;
        mean.ai += row.rho.ai;
        ++count;
    }
    const double c = static_cast<double>(count);
    return {mean.us / c, mean.as / c, mean.ui / c, mean.ai / c};
}

std::string format_double(double x) {
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), end);
}

void write_series_csv(std::ostream& out, const FractionSeries& series) {
    out << "t,rho_US,rho_AS,rho_UI,rho_AI\n";
    for (const auto& row : series.rows) {
        out << row.t << ',' << format_double(row.rho.us) << ',' << format_double(row.rho.as) << ','
            << format_double(row.rho.ui) << ',' << format_double(row.rho.ai) << '\n';
    }
}

} // namespace wsnsis
