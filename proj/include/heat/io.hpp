#pragma once

#include <map>
#include <string>
#include <vector>

#include "heat/evaluation.hpp"
#include "heat/optimizer.hpp"

namespace heat {

// Embedding CSV: header `id,x0,...,xn`, one row per node, 17 significant
// digits.
void save_embedding_csv(const std::string& path,
                        const HyperboloidEmbedding& emb,
                        const std::vector<std::string>& ids);

struct LoadedEmbedding {
  HyperboloidEmbedding emb;
  std::vector<std::string> ids;
};

// Parses an embedding CSV; rows violating the hyperboloid constraint
// beyond constraint_tol raise a DataError naming the row.
LoadedEmbedding load_embedding_csv(const std::string& path,
                                   double constraint_tol = 1e-6);

// Flat key=value file, one entry per line, sorted keys.
void write_manifest(const std::string& path,
                    const std::map<std::string, std::string>& entries);

// `index,id` rows mapping dense indices back to external node ids.
void save_id_map(const std::string& path,
                 const std::vector<std::string>& ids);

// One walk per line, space-separated external node ids.
void save_walks(const std::string& path,
                const std::vector<std::vector<int>>& walks,
                const std::vector<std::string>& ids);

// `epoch,mean_loss` per line.
void save_loss_trace(const std::string& path,
                     const std::vector<double>& epoch_losses);

// Appends report rows, writing the header first when the file is new.
void append_results_csv(const std::string& path, const EvalReport& report);

}  // namespace heat
