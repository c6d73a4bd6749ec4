#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace wsnsis {

/// Per-step probabilities of the sleep-scheduled SIS process.
struct ModelParams {
    double beta = 0.5;  ///< infection per active infected neighbor
    double gamma = 0.3; ///< recovery of an active infected node
    double u = 0.3;     ///< active -> sleep
    double v = 0.7;     ///< sleep -> active

    /// Throws ValidationError if a field is outside [0, 1] (or NaN), and
    /// DegenerateSchedulingError if u = v = 0.
    void validate() const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Long-run share of active nodes under the sleep schedule, v / (u + v).
double stationary_active_fraction(const ModelParams& params);

/// Population shares of the four joint states.
struct Fractions {
    double us = 0.0;
    double as = 0.0;
    double ui = 0.0;
    double ai = 0.0;

    double infected() const noexcept { return ui + ai; }
    double active() const noexcept { return as + ai; }
    double asleep() const noexcept { return us + ui; }
    double sum() const noexcept { return us + as + ui + ai; }

    friend bool operator==(const Fractions&, const Fractions&) = default;
};

struct FractionRow {
    std::size_t t = 0;
    Fractions rho;

    friend bool operator==(const FractionRow&, const FractionRow&) = default;
};

/// Fractions recorded at consecutive steps starting from t = 0.
struct FractionSeries {
    std::vector<FractionRow> rows;
    bool settled = false; ///< the producing run stopped early on its settle criterion

    const Fractions& final() const { return rows.back().rho; }

    friend bool operator==(const FractionSeries&, const FractionSeries&) = default;
};

/// Mean over the rows with t > t_last - window, i.e. the last `window` steps.
Fractions tail_average(const FractionSeries& series, std::size_t window);

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);

/// CSV with header t,rho_US,rho_AS,rho_UI,rho_AI.
void write_series_csv(std::ostream& out, const FractionSeries& series);

} // namespace wsnsis
