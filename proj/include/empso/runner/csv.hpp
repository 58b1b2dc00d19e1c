#pragma once

// CSV views of a RunRecord, one file per plotted quantity.

#include "empso/numerics.hpp"
#include "empso/runner/experiment.hpp"
#include "empso/schrodinger.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace empso::runner {

enum class CsvKind { wavefunction, losses, probability, energy };

inline std::string_view csv_file_name(CsvKind k) {
    switch (k) {
    case CsvKind::wavefunction: return "wavefunction.csv";
    case CsvKind::losses: return "losses.csv";
    case CsvKind::probability: return "probability.csv";
    case CsvKind::energy: return "energy.csv";
    }
    return "";
}

/// Writes one CSV with a header row; numbers carry 17 significant digits.
inline void write_csv(const RunRecord& rec, CsvKind what, std::ostream& out) {
    out << std::setprecision(17);
    switch (what) {
    case CsvKind::wavefunction: {
        if (rec.grid_x.empty())
            throw std::invalid_argument("record has no sampled wavefunction");
        auto grid = numerics::make_grid(rec.grid_x.front(), rec.grid_x.back(), rec.grid_x.size());
        const numerics::SampledFunction psi(grid, rec.psi);
        const auto ref = schrodinger::analytic_wavefunction(rec.config.n, rec.grid_x.back() - rec.grid_x.front(), grid);
        const double sign = schrodinger::phase_sign(psi, ref);
        out << "x,psi_hat,psi_analytic,abs_error_phase_aligned\n";
        for (std::size_t i = 0; i < psi.size(); ++i)
            out << rec.grid_x[i] << ',' << psi[i] << ',' << ref[i] << ',' << std::fabs(sign * psi[i] - ref[i])
                << '\n';
        break;
    }
    case CsvKind::losses:
        out << "iteration,total_loss,residual_integral,regularization\n";
        for (const auto& h : rec.history)
            out << h.iteration << ',' << h.total_loss << ',' << h.residual_integral << ',' << h.regularization << '\n';
        break;
    case CsvKind::probability:
        out << "iteration,p\n";
        for (const auto& h : rec.history)
            out << h.iteration << ',' << h.probability << '\n';
        break;
    case CsvKind::energy:
        out << "iteration,E\n";
        for (const auto& h : rec.history)
            out << h.iteration << ',' << h.energy << '\n';
        break;
    }
}

inline std::filesystem::path export_csv(const RunRecord& rec, CsvKind what, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto path = dir / csv_file_name(what);
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    write_csv(rec, what, out);
    out.flush();
    if (!out)
        throw std::runtime_error("failed writing " + path.string());
    return path;
}

inline void export_all_csv(const RunRecord& rec, const std::filesystem::path& dir) {
    for (auto k : {CsvKind::wavefunction, CsvKind::losses, CsvKind::probability, CsvKind::energy})
        export_csv(rec, k, dir);
}

} // namespace empso::runner
