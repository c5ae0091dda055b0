#include "solkin/diagnostics.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>

#include "solkin/basis.hpp"
#include "solkin/common.hpp"

namespace solkin {

namespace {

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

WallFlux wall_flux(const NodalField& f, WallSide side) {
    const auto& basis = ReferenceBasis::get(f.degree());
    const int p = f.nodes_per_cell();
    const int nv = f.nv();
    const Grid1D& v = f.v();

    // trace of the boundary-cell polynomial at the wall coordinate
    const int xc = side == WallSide::Right ? f.nx() - 1 : 0;
    const double edge = side == WallSide::Right ? 1.0 : 0.0;
    std::vector<double> tx(p);
    for (int n = 0; n < p; ++n) tx[n] = basis.lagrange(n, edge);

    std::vector<double> fw(size_t(nv) * p, 0.0);  // f(wall, v) per v dof
    for (int vc = 0; vc < nv; ++vc)
        for (int vn = 0; vn < p; ++vn) {
            double acc = 0.0;
            for (int xn = 0; xn < p; ++xn) acc += tx[xn] * f.at(xc, xn, vc, vn);
            fw[size_t(vc) * p + vn] = acc;
        }

    WallFlux out;
    const double dv = v.blocks()[0].dx;
    for (int vc = 0; vc < nv; ++vc) {
        double a = v.cell_left(vc), b = a + dv;
        std::span<const double> cell(fw.data() + size_t(vc) * p, p);
        // naive: signed integral over the whole cell
        for (int q = 0; q < p; ++q) {
            double vq = a + dv * basis.nodes()[q];
            out.naive += basis.weights()[q] * dv * vq * cell[q];
        }
        // outflow-only: split the cell containing v=0 exactly
        double lo = a, hi = b;
        if (side == WallSide::Right)
            lo = std::max(a, 0.0);
        else
            hi = std::min(b, 0.0);
        if (hi <= lo) continue;
        double len = hi - lo;
        for (int q = 0; q < p; ++q) {
            double vq = lo + len * basis.nodes()[q];
            double fv = basis.evaluate(cell, (vq - a) / dv);
            out.outflow += basis.weights()[q] * len * std::abs(vq) * fv;
        }
    }
    return out;
}

double electric_energy(const FieldPair& field) {
    const auto& basis = ReferenceBasis::get(field.k);
    const int p = field.k + 1;
    double acc = 0.0;
    for (int c = 0; c < field.grid.ncells(); ++c) {
        double h = field.grid.cell_width(c);
        for (int q = 0; q < p; ++q) {
            double e = field.E[size_t(c) * p + q];
            acc += 0.5 * basis.weights()[q] * h * e * e;
        }
    }
    return acc;
}

Summary summarize(const NodalField& f_e, const NodalField& f_i, const FieldPair& field) {
    Summary s;
    s.mass_e = f_e.mass();
    s.mass_i = f_i.mass();
    s.charge = s.mass_i - s.mass_e;
    s.l2_e = f_e.l2_norm();
    s.l2_i = f_i.l2_norm();
    s.e_energy = electric_energy(field);
    s.vmax_e = f_e.v().right();
    s.vmax_i = f_i.v().right();
    return s;
}

FluxSample sample_fluxes(double t, const NodalField& f_e, const NodalField& f_i,
                         const FieldPair& field) {
    FluxSample s;
    s.t = t;
    WallFlux er = wall_flux(f_e, WallSide::Right), el = wall_flux(f_e, WallSide::Left);
    WallFlux ir = wall_flux(f_i, WallSide::Right), il = wall_flux(f_i, WallSide::Left);
    s.je_plus = er.outflow;
    s.je_minus = el.outflow;
    s.ji_plus = ir.outflow;
    s.ji_minus = il.outflow;
    s.je_naive = er.naive;
    s.ji_naive = ir.naive;
    s.mass_e = f_e.mass();
    s.mass_i = f_i.mass();
    s.e_energy = electric_energy(field);
    s.vmax_e = f_e.v().right();
    s.vmax_i = f_i.v().right();
    return s;
}

OutputWriter::OutputWriter(std::string dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    require(!ec, "cannot create output directory '" + dir_ + "': " + ec.message());
    flux_.open(dir_ + "/flux.csv", std::ios::trunc);
    require(flux_.good(), "cannot open '" + dir_ + "/flux.csv' for writing");
    log_.open(dir_ + "/run.log", std::ios::trunc);
    require(log_.good(), "cannot open '" + dir_ + "/run.log' for writing");
}

void OutputWriter::write_flux_row(const FluxSample& s) {
    if (!flux_header_done_) {
        flux_ << "t,je_plus,je_minus,ji_plus,ji_minus,je_naive,ji_naive,"
                 "mass_e,mass_i,E_energy,vmax_e,vmax_i\n";
        flux_header_done_ = true;
    }
    flux_ << g17(s.t) << ',' << g17(s.je_plus) << ',' << g17(s.je_minus) << ','
          << g17(s.ji_plus) << ',' << g17(s.ji_minus) << ',' << g17(s.je_naive) << ','
          << g17(s.ji_naive) << ',' << g17(s.mass_e) << ',' << g17(s.mass_i) << ','
          << g17(s.e_energy) << ',' << g17(s.vmax_e) << ',' << g17(s.vmax_i) << '\n';
    flux_.flush();
    require(flux_.good(), "write failed on '" + dir_ + "/flux.csv'");
}

namespace {

void write_species_block(std::FILE* fp, const NodalField& f) {
    const int p = f.nodes_per_cell();
    int32_t header[3] = {static_cast<int32_t>(f.degree()), static_cast<int32_t>(f.nx()),
                         static_cast<int32_t>(f.nv())};
    std::fwrite(header, sizeof(int32_t), 3, fp);
    auto xe = f.x().cell_edges();
    auto ve = f.v().cell_edges();
    std::fwrite(xe.data(), sizeof(double), xe.size(), fp);
    std::fwrite(ve.data(), sizeof(double), ve.size(), fp);
    // payload in (x-cell, x-node, v-cell, v-node) order
    for (int xc = 0; xc < f.nx(); ++xc)
        for (int xn = 0; xn < p; ++xn)
            for (int vc = 0; vc < f.nv(); ++vc)
                for (int vn = 0; vn < p; ++vn) {
                    double val = f.at(xc, xn, vc, vn);
                    std::fwrite(&val, sizeof(double), 1, fp);
                }
}

}  // namespace

void OutputWriter::write_snapshot(long step, double time, const NodalField& f_e,
                                  const NodalField& f_i) {
    std::string base = dir_ + "/snapshot_" + std::to_string(step);
    std::FILE* fp = std::fopen((base + ".bin").c_str(), "wb");
    require(fp != nullptr, "cannot open '" + base + ".bin' for writing");
    const char magic[8] = {'S', 'O', 'L', 'K', 'S', 'N', 'P', '1'};
    std::fwrite(magic, 1, 8, fp);
    int64_t step64 = step;
    std::fwrite(&step64, sizeof(int64_t), 1, fp);
    std::fwrite(&time, sizeof(double), 1, fp);
    int32_t nspecies = 2;
    std::fwrite(&nspecies, sizeof(int32_t), 1, fp);
    write_species_block(fp, f_e);
    write_species_block(fp, f_i);
    bool ok = std::fclose(fp) == 0;
    require(ok, "write failed on '" + base + ".bin'");

    std::string meta;
    meta += "snapshot " + std::to_string(step) + " at t=" + g17(time) + "\n";
    meta += "layout: magic[8]='SOLKSNP1', int64 step, double time, int32 nspecies\n";
    meta += "per species: int32 k, int32 nx_cells, int32 nv_cells,\n";
    meta += "  double x_edges[nx_cells+1], double v_edges[nv_cells+1],\n";
    meta += "  double values[nx_cells*(k+1)*nv_cells*(k+1)] row-major in\n";
    meta += "  (x_cell, x_node, v_cell, v_node); nodes are Gauss-Legendre on each cell\n";
    meta += "species order: electron, ion\n";
    for (const NodalField* f : {&f_e, &f_i})
        meta += std::string(species_name(f->species())) + ": k=" + std::to_string(f->degree()) +
                " nx=" + std::to_string(f->nx()) + " nv=" + std::to_string(f->nv()) +
                " x=[" + g17(f->x().left()) + "," + g17(f->x().right()) + "]" +
                " v=[" + g17(f->v().left()) + "," + g17(f->v().right()) + "]\n";
    write_text("snapshot_" + std::to_string(step) + ".meta", meta);
}

void OutputWriter::write_profiles(long step, const NodalField& f_e, const NodalField& f_i,
                                  const FieldPair& field) {
    const auto& basis = ReferenceBasis::get(f_e.degree());
    const auto& bs = ReferenceBasis::get(f_e.degree() + 1);
    const int p = f_e.nodes_per_cell();
    auto rho = charge_density(f_e, f_i);

    std::string path = dir_ + "/profiles_" + std::to_string(step) + ".csv";
    std::ofstream out(path, std::ios::trunc);
    require(out.good(), "cannot open '" + path + "' for writing");
    out << "x,rho,phi,E\n";
    for (int c = 0; c < field.grid.ncells(); ++c) {
        double xl = field.grid.cell_left(c), h = field.grid.cell_width(c);
        std::span<const double> phic(field.phi.data() + size_t(c) * (p + 1), p + 1);
        for (int n = 0; n < p; ++n) {
            double xi = basis.nodes()[n];
            double phi = bs.evaluate(phic, xi);
            out << g17(xl + h * xi) << ',' << g17(rho[size_t(c) * p + n]) << ',' << g17(phi)
                << ',' << g17(field.E[size_t(c) * p + n]) << '\n';
        }
    }
    require(out.good(), "write failed on '" + path + "'");
}

void OutputWriter::write_text(const std::string& filename, const std::string& content) {
    std::string path = dir_ + "/" + filename;
    std::ofstream out(path, std::ios::trunc);
    require(out.good(), "cannot open '" + path + "' for writing");
    out << content;
    require(out.good(), "write failed on '" + path + "'");
}

void OutputWriter::log(const std::string& line) {
    log_ << line << '\n';
    log_.flush();
}

}  // namespace solkin
