// CSV output with '#' metadata lines ahead of the header row.

#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "gaussdyn/coefficients.hpp"
#include "gaussdyn/dynamics.hpp"

namespace gaussdyn::cli {

inline constexpr const char* kToolVersion = "0.1.0";

using Metadata = std::vector<std::pair<std::string, std::string>>;

class CsvWriter {
public:
    // Writes the metadata block (tool version, units note, then `meta`) and
    // the header row.
    CsvWriter(std::ostream& out, const Metadata& meta, const std::vector<std::string>& columns);

    void row(const std::vector<double>& values);
    // Mixed rows; text cells are quoted when they contain ',', '"' or newlines.
    void row(const std::vector<std::string>& cells);

private:
    std::ostream& out_;
    std::size_t columns_;
};

std::string quote_cell(const std::string& cell);

// Frozen schemas.
const std::vector<std::string>& coeffs_columns();
const std::vector<std::string>& evolve_columns();
const std::vector<std::string>& phase_line_columns();
const std::vector<std::string>& figure_columns();

void write_coeffs(std::ostream& out, const Metadata& meta, const CoefficientTable& table);
// Every `stride`-th sample plus the last one.
void write_trajectory(std::ostream& out, const Metadata& meta, const Trajectory& traj, std::size_t stride = 1);

}  // namespace gaussdyn::cli
