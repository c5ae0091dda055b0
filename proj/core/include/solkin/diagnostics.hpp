#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "solkin/field.hpp"
#include "solkin/poisson.hpp"

namespace solkin {

enum class WallSide { Left, Right };

// Outflow-only wall flux plus the naive full-velocity integral. The outflow
// form avoids the limiter's diffusive footprint at the zero-inflow boundary.
struct WallFlux {
    double outflow = 0.0;  // right: int_{v>=0} v f(L,v) dv; left: int_{v<=0} |v| f(-L,v) dv
    double naive = 0.0;    // int_R v f(wall,v) dv
};

WallFlux wall_flux(const NodalField& f, WallSide side);

struct FluxSample {
    double t = 0.0;
    double je_plus = 0.0, je_minus = 0.0;
    double ji_plus = 0.0, ji_minus = 0.0;
    double je_naive = 0.0, ji_naive = 0.0;
    double mass_e = 0.0, mass_i = 0.0;
    double e_energy = 0.0;
    double vmax_e = 0.0, vmax_i = 0.0;
};

struct Summary {
    double mass_e = 0.0, mass_i = 0.0;
    double charge = 0.0;
    double l2_e = 0.0, l2_i = 0.0;
    double e_energy = 0.0;
    double vmax_e = 0.0, vmax_i = 0.0;
};

double electric_energy(const FieldPair& field);
Summary summarize(const NodalField& f_e, const NodalField& f_i, const FieldPair& field);
FluxSample sample_fluxes(double t, const NodalField& f_e, const NodalField& f_i,
                         const FieldPair& field);

// File sinks: flux.csv time series, flat binary snapshots with a text
// descriptor, and per-profile CSVs. All numbers carry 17 significant digits
// so a re-run reproduces the files byte for byte.
class OutputWriter {
  public:
    explicit OutputWriter(std::string dir);

    const std::string& dir() const { return dir_; }

    void write_flux_row(const FluxSample& s);
    void write_snapshot(long step, double time, const NodalField& f_e, const NodalField& f_i);
    void write_profiles(long step, const NodalField& f_e, const NodalField& f_i,
                        const FieldPair& field);
    void write_text(const std::string& filename, const std::string& content);
    void log(const std::string& line);

  private:
    std::string dir_;
    std::ofstream flux_;
    std::ofstream log_;
    bool flux_header_done_ = false;
};

}  // namespace solkin
