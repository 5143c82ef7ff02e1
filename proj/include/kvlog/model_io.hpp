#ifndef KVLOG_MODEL_IO_HPP
#define KVLOG_MODEL_IO_HPP

#include <string>
#include <variant>

#include <json.hpp>

#include "kvlog/models.hpp"

namespace kvlog {

using AnyModel = std::variant<TernaryModel, FOKripkeModel>;

struct LoadedModel {
  AnyModel model;
  /// Number of triples added to close the file's triple lists under SYM.
  std::size_t sym_completions = 0;

  bool is_ternary() const { return std::holds_alternative<TernaryModel>(model); }
  const TernaryModel& ternary() const;
  const FOKripkeModel& fo() const;
};

nlohmann::json vocab_to_json(const Vocabulary& v);
Vocabulary vocab_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TernaryModel& m);
nlohmann::json to_json(const FOKripkeModel& m);
LoadedModel model_from_json(const nlohmann::json& j);

LoadedModel load_model_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace kvlog

#endif  // KVLOG_MODEL_IO_HPP
