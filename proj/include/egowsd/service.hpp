#pragma once

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "egowsd/disambiguation.hpp"
#include "egowsd/model.hpp"

namespace egowsd::service {

inline constexpr int kApiVersion = 1;

enum class ImageProviderKind { none, static_map, external };

struct ApiConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::map<std::string, std::filesystem::path> models;  // directory id -> path
  ImageProviderKind image_provider = ImageProviderKind::none;
  std::filesystem::path image_map;  // static-map: "word hypernym<TAB>url" lines
  std::string image_endpoint;       // external: http(s)://host[:port]/path
  std::string image_key;
  std::vector<std::string> cors_origins;  // "*" allows any origin
  std::filesystem::path static_dir;

  /// `key<TAB>value` or `key=value` lines; `model.<id>` adds a model.
  static ApiConfig from_file(const std::filesystem::path& path);
  static ApiConfig from_pairs(const std::vector<std::pair<std::string, std::string>>& pairs);

  /// WSD_PORT overrides the port, WSD_MODEL_PATH the "default" model.
  void apply_env();
  void validate() const;
};

class ImageProvider {
 public:
  virtual ~ImageProvider() = default;
  /// URL for the query "word hypernym", or nullopt. Never throws.
  virtual std::optional<std::string> lookup(const std::string& word, const std::string& hypernym) = 0;
  /// Outgoing HTTP requests made so far.
  virtual std::size_t network_requests() const { return 0; }
};

class NullImageProvider : public ImageProvider {
 public:
  std::optional<std::string> lookup(const std::string&, const std::string&) override { return std::nullopt; }
};

class StaticMapImageProvider : public ImageProvider {
 public:
  explicit StaticMapImageProvider(std::map<std::string, std::string> urls) : urls_(std::move(urls)) {}
  static std::unique_ptr<StaticMapImageProvider> from_file(const std::filesystem::path& path);
  std::optional<std::string> lookup(const std::string& word, const std::string& hypernym) override;

 private:
  std::map<std::string, std::string> urls_;
};

/// Queries `endpoint?q=word+hypernym` and takes `value[0].contentUrl` of the
/// JSON answer. Successful lookups are cached per query.
class ExternalImageProvider : public ImageProvider {
 public:
  ExternalImageProvider(std::string endpoint, std::string key, double timeout_seconds = 2.0);
  std::optional<std::string> lookup(const std::string& word, const std::string& hypernym) override;
  std::size_t network_requests() const override { return requests_.load(); }

 private:
  std::string origin_;
  std::string path_;
  std::string key_;
  double timeout_;
  std::mutex mutex_;
  std::map<std::string, std::string> cache_;
  std::atomic<std::size_t> requests_{0};
};

std::unique_ptr<ImageProvider> make_image_provider(const ApiConfig& config);

/// A transport-independent request, as seen by Service::handle.
struct ApiRequest {
  std::string method;  // GET, POST, OPTIONS
  std::string path;    // decoded path
  std::map<std::string, std::string> query;
  std::string body;
  std::string origin;  // Origin header, if any
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
  std::map<std::string, std::string> headers;
};

/// A loaded model directory exposed as `<dir>:<inventory>-<features>`.
struct ServedModel {
  std::string dir_id;
  Model model;
  std::map<std::string, std::string> manifest;
};

class Service {
 public:
  /// Loads every configured model; any invalid directory throws.
  explicit Service(ApiConfig config);
  Service(ApiConfig config, std::map<std::string, ServedModel> models, std::unique_ptr<ImageProvider> images);

  ApiResponse handle(const ApiRequest& request) const;

  /// Blocks serving HTTP until stop() is called. `on_ready` receives the bound port.
  void run(const std::function<void(int)>& on_ready = {});
  void stop();

  const ImageProvider& images() const { return *images_; }
  /// Public model ids in listing order.
  std::vector<std::string> model_ids() const;

 private:
  struct Resolved {
    const ServedModel* served;
    wsd::ModelId id;
  };
  Resolved resolve(const std::string& model_id) const;

  ApiResponse models() const;
  ApiResponse inventory(const std::string& model_id, const std::string& word) const;
  ApiResponse predict(const nlohmann::json& body) const;
  ApiResponse predict_all(const nlohmann::json& body) const;
  ApiResponse trace(const std::string& model_id, const std::string& word, const std::string& sense_id,
                    const std::map<std::string, std::string>& query) const;
  ApiResponse image(const std::map<std::string, std::string>& query) const;

  nlohmann::json candidate_json(const Model& model, const wsd::Candidate& c) const;
  nlohmann::json prediction_json(const Model& model, const std::string& model_id, const wsd::Prediction& p) const;
  std::optional<std::string> image_for(const std::string& word, const hypernymy::HypernymLabels& hypernyms) const;

  ApiConfig config_;
  std::map<std::string, ServedModel> models_;
  std::unique_ptr<ImageProvider> images_;
  struct Server;
  std::shared_ptr<Server> server_;
};

/// Character (code point) offset of byte offset `byte` in UTF-8 `text`.
std::size_t char_offset(std::string_view text, std::size_t byte);

}  // namespace egowsd::service
