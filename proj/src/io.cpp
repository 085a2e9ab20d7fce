#include "heat/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "heat/errors.hpp"
#include "heat/geometry.hpp"

namespace heat {

namespace geo = heat::geometry;

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  return out;
}

std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void save_embedding_csv(const std::string& path,
                        const HyperboloidEmbedding& emb,
                        const std::vector<std::string>& ids) {
  if (static_cast<int>(ids.size()) != emb.num_points()) {
    throw DataError("save_embedding_csv: id count mismatch");
  }
  auto out = open_out(path);
  out << "id";
  for (int k = 0; k <= emb.dim(); ++k) out << ",x" << k;
  out << '\n';
  for (int u = 0; u < emb.num_points(); ++u) {
    out << ids[u];
    for (int k = 0; k <= emb.dim(); ++k) {
      out << ',' << format_g17(emb.points(u, k));
    }
    out << '\n';
  }
}

LoadedEmbedding load_embedding_csv(const std::string& path,
                                   double constraint_tol) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty embedding file");

  std::vector<std::vector<double>> rows;
  std::vector<std::string> ids;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::getline(ss, field, ',');
    ids.push_back(field);
    std::vector<double> coords;
    while (std::getline(ss, field, ',')) {
      try {
        coords.push_back(std::stod(field));
      } catch (const std::exception&) {
        throw DataError("embedding file line " + std::to_string(line_no) +
                        ": bad number '" + field + "'");
      }
    }
    if (coords.size() < 3 || (!rows.empty() && coords.size() != rows[0].size())) {
      throw DataError("embedding file line " + std::to_string(line_no) +
                      ": inconsistent row length");
    }
    rows.push_back(std::move(coords));
  }
  if (rows.empty()) throw DataError("embedding file has no rows");

  LoadedEmbedding loaded;
  loaded.ids = std::move(ids);
  loaded.emb.points.resize(rows.size(), rows[0].size());
  for (std::size_t u = 0; u < rows.size(); ++u) {
    for (std::size_t k = 0; k < rows[u].size(); ++k) {
      loaded.emb.points(u, k) = rows[u][k];
    }
    Eigen::VectorXd x = loaded.emb.points.row(u);
    double residual = std::abs(geo::minkowski_inner(x, x) + 1.0);
    if (residual > constraint_tol) {
      throw DataError("embedding row for '" + loaded.ids[u] +
                      "' violates the hyperboloid constraint (residual " +
                      std::to_string(residual) + ")");
    }
  }
  return loaded;
}

void write_manifest(const std::string& path,
                    const std::map<std::string, std::string>& entries) {
  auto out = open_out(path);
  for (const auto& [key, value] : entries) {
    out << key << '=' << value << '\n';
  }
}

void save_id_map(const std::string& path,
                 const std::vector<std::string>& ids) {
  auto out = open_out(path);
  out << "index,id\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << i << ',' << ids[i] << '\n';
  }
}

void save_walks(const std::string& path,
                const std::vector<std::vector<int>>& walks,
                const std::vector<std::string>& ids) {
  auto out = open_out(path);
  for (const auto& walk : walks) {
    for (std::size_t i = 0; i < walk.size(); ++i) {
      if (i) out << ' ';
      out << ids[walk[i]];
    }
    out << '\n';
  }
}

void save_loss_trace(const std::string& path,
                     const std::vector<double>& epoch_losses) {
  auto out = open_out(path);
  out << "epoch,mean_loss\n";
  for (std::size_t e = 0; e < epoch_losses.size(); ++e) {
    out << e << ',' << format_g17(epoch_losses[e]) << '\n';
  }
}

void append_results_csv(const std::string& path, const EvalReport& report) {
  bool fresh = !std::filesystem::exists(path) ||
               std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw DataError("cannot open results file: " + path);
  if (fresh) out << kReportCsvHeader << '\n';
  out << report_csv_rows(report);
}

}  // namespace heat
