#include "gaussdyn/cli/csv.hpp"

#include "gaussdyn/cli/config.hpp"
#include "gaussdyn/errors.hpp"

namespace gaussdyn::cli {

std::string quote_cell(const std::string& cell) {
    if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
    std::string q = "\"";
    for (char c : cell) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

CsvWriter::CsvWriter(std::ostream& out, const Metadata& meta, const std::vector<std::string>& columns)
    : out_(out), columns_(columns.size()) {
    out_ << "# gaussdyn " << kToolVersion << '\n';
    out_ << "# units: hbar=M=Omega_r=1\n";
    for (const auto& [k, v] : meta) out_ << "# " << k << '=' << v << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != columns_) throw DomainError("CSV row width does not match the header");
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_number(values[i]);
    out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw DomainError("CSV row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << quote_cell(cells[i]);
    out_ << '\n';
}

const std::vector<std::string>& coeffs_columns() {
    static const std::vector<std::string> c = {"t",       "omega_shift_sq_1", "omega_shift_sq_2",
                                               "gamma_1", "gamma_2",          "d_1",
                                               "d_2",     "f_1",              "f_2"};
    return c;
}

const std::vector<std::string>& evolve_columns() {
    static const std::vector<std::string> c = {"t",   "e_n", "v_s", "v11", "v12", "v13", "v14", "v22",
                                               "v23", "v24", "v33", "v34", "v44", "physical"};
    return c;
}

const std::vector<std::string>& phase_line_columns() {
    static const std::vector<std::string> c = {"r", "lambda_c"};
    return c;
}

const std::vector<std::string>& figure_columns() {
    static const std::vector<std::string> c = {"series", "model", "r", "lambda", "gamma0", "t", "e_n", "v_s"};
    return c;
}

void write_coeffs(std::ostream& out, const Metadata& meta, const CoefficientTable& table) {
    CsvWriter w(out, meta, coeffs_columns());
    for (const auto& s : table.sets()) {
        w.row(std::vector<double>{s.t, s.omega_shift_sq[0], s.omega_shift_sq[1], s.gamma[0], s.gamma[1],
                                  s.diff_d[0], s.diff_d[1], s.diff_f[0], s.diff_f[1]});
    }
}

void write_trajectory(std::ostream& out, const Metadata& meta, const Trajectory& traj, std::size_t stride) {
    CsvWriter w(out, meta, evolve_columns());
    if (stride == 0) stride = 1;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        if (k % stride != 0 && k + 1 != traj.size()) continue;
        std::vector<double> row{traj.times[k], traj.log_neg[k], traj.v_s[k]};
        for (double c : traj.covariances[k].components()) row.push_back(c);
        row.push_back(traj.physical[k] ? 1.0 : 0.0);
        w.row(row);
    }
}

}  // namespace gaussdyn::cli
