#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nbcoll/blowup.hpp"
#include "nbcoll/equilibria.hpp"
#include "nbcoll/nbody.hpp"
#include "nbcoll/pipeline.hpp"
#include "nbcoll/spin_lab.hpp"

namespace nbcoll::cli {

// Full round-trip precision.
std::string format_double(double x);

// Rows of already formatted cells under a header.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row);
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Writes to a temporary sibling and renames it over the target.
void write_atomic(const std::string& path, const std::string& content);

nlohmann::json to_json(const VecX& v);
VecX vec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MatX& m);
MatX mat_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Vec3List& v);

nlohmann::json to_json(const EquilibriumReport& r);
EquilibriumReport equilibrium_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ChartDump& d);
nlohmann::json to_json(const SpinReport& r);

}  // namespace nbcoll::cli
