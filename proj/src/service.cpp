#include "egowsd/service.hpp"

#include <cstdlib>
#include <fstream>

#include <httplib.h>

#include "egowsd/errors.hpp"
#include "egowsd/store.hpp"

namespace egowsd::service {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kContextClues = 10;

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

ApiResponse error(int status, const std::string& message) {
  return {status, json{{"api_version", kApiVersion}, {"error", message}}, {}};
}

ApiResponse ok(json body) {
  body["api_version"] = kApiVersion;
  return {200, std::move(body), {}};
}

json weighted_json(const WeightedWords& words) {
  json out = json::array();
  for (const auto& w : words) out.push_back({{"word", w.word}, {"weight", w.weight}});
  return out;
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (begin <= path.size()) {
    auto slash = path.find('/', begin);
    if (slash == std::string::npos) slash = path.size();
    if (slash > begin) out.push_back(path.substr(begin, slash - begin));
    begin = slash + 1;
  }
  return out;
}

/// Required string member; nullopt when absent or not a string.
std::optional<std::string> string_field(const json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || !it->is_string()) return std::nullopt;
  return it->get<std::string>();
}

}  // namespace

std::size_t char_offset(std::string_view text, std::size_t byte) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) ++n;
  }
  return n;
}

ApiConfig ApiConfig::from_pairs(const std::vector<std::pair<std::string, std::string>>& pairs) {
  ApiConfig c;
  for (const auto& [key, value] : pairs) {
    if (key == "host") {
      c.host = value;
    } else if (key == "port") {
      try {
        std::size_t used = 0;
        c.port = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
      } catch (const std::exception&) {
        throw Error("config: port must be an integer, got '" + value + "'");
      }
    } else if (key.rfind("model.", 0) == 0) {
      auto id = key.substr(6);
      if (id.empty() || id.find_first_of(":/") != std::string::npos) throw Error("config: invalid model id '" + id + "'");
      c.models[id] = value;
    } else if (key == "image_provider") {
      if (value == "none") c.image_provider = ImageProviderKind::none;
      else if (value == "static-map") c.image_provider = ImageProviderKind::static_map;
      else if (value == "external") c.image_provider = ImageProviderKind::external;
      else throw Error("config: image_provider must be none, static-map or external, got '" + value + "'");
    } else if (key == "image_map") {
      c.image_map = value;
    } else if (key == "image_endpoint") {
      c.image_endpoint = value;
    } else if (key == "image_key") {
      c.image_key = value;
    } else if (key == "cors_origins") {
      std::size_t begin = 0;
      while (begin <= value.size()) {
        auto comma = value.find(',', begin);
        if (comma == std::string::npos) comma = value.size();
        auto origin = trim(value.substr(begin, comma - begin));
        if (!origin.empty()) c.cors_origins.push_back(origin);
        begin = comma + 1;
      }
    } else if (key == "static_dir") {
      c.static_dir = value;
    } else {
      throw Error("config: unknown key '" + key + "'");
    }
  }
  return c;
}

ApiConfig ApiConfig::from_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto sep = t.find('\t');
    if (sep == std::string::npos) sep = t.find('=');
    if (sep == std::string::npos) throw ParseError(path.string(), line_no, "expected key<TAB>value or key=value");
    pairs.emplace_back(trim(t.substr(0, sep)), trim(t.substr(sep + 1)));
  }
  auto config = from_pairs(pairs);
  // Relative paths are resolved against the config file.
  auto base = path.parent_path();
  auto resolve = [&](fs::path& p) {
    if (!p.empty() && p.is_relative()) p = base / p;
  };
  for (auto& [_, p] : config.models) resolve(p);
  resolve(config.image_map);
  resolve(config.static_dir);
  return config;
}

void ApiConfig::apply_env() {
  if (const char* port_env = std::getenv("WSD_PORT")) {
    try {
      port = std::stoi(port_env);
    } catch (const std::exception&) {
      throw Error(std::string("WSD_PORT must be an integer, got '") + port_env + "'");
    }
  }
  if (const char* model_env = std::getenv("WSD_MODEL_PATH")) models["default"] = model_env;
}

void ApiConfig::validate() const {
  if (models.empty()) throw Error("config: no models configured");
  if (port < 0 || port > 65535) throw Error("config: port out of range");
  if (image_provider == ImageProviderKind::external && image_endpoint.empty()) {
    throw Error("config: image_provider external requires image_endpoint");
  }
  if (image_provider == ImageProviderKind::static_map && image_map.empty()) {
    throw Error("config: image_provider static-map requires image_map");
  }
}

std::unique_ptr<StaticMapImageProvider> StaticMapImageProvider::from_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read image map " + path.string());
  std::map<std::string, std::string> urls;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(path.string(), line_no, "expected query<TAB>url");
    urls[trim(line.substr(0, tab))] = trim(line.substr(tab + 1));
  }
  return std::make_unique<StaticMapImageProvider>(std::move(urls));
}

std::optional<std::string> StaticMapImageProvider::lookup(const std::string& word, const std::string& hypernym) {
  auto it = urls_.find(word + " " + hypernym);
  if (it == urls_.end()) return std::nullopt;
  return it->second;
}

ExternalImageProvider::ExternalImageProvider(std::string endpoint, std::string key, double timeout_seconds)
    : key_(std::move(key)), timeout_(timeout_seconds) {
  auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) throw Error("image endpoint must be an absolute URL: " + endpoint);
  auto path_begin = endpoint.find('/', scheme_end + 3);
  origin_ = endpoint.substr(0, path_begin);
  path_ = path_begin == std::string::npos ? "/" : endpoint.substr(path_begin);
}

std::optional<std::string> ExternalImageProvider::lookup(const std::string& word, const std::string& hypernym) {
  const std::string query = word + " " + hypernym;
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(query); it != cache_.end()) return it->second;
  }
  try {
    httplib::Client client(origin_);
    auto seconds = static_cast<time_t>(timeout_);
    auto micros = static_cast<time_t>((timeout_ - static_cast<double>(seconds)) * 1e6);
    client.set_connection_timeout(seconds, micros);
    client.set_read_timeout(seconds, micros);
    client.set_write_timeout(seconds, micros);
    httplib::Headers headers;
    if (!key_.empty()) headers.emplace("Ocp-Apim-Subscription-Key", key_);
    ++requests_;
    auto res = client.Get(path_, httplib::Params{{"q", query}, {"count", "1"}}, headers);
    if (!res || res->status != 200) return std::nullopt;
    auto body = json::parse(res->body);
    const auto& url = body.at("value").at(0).at("contentUrl");
    if (!url.is_string()) return std::nullopt;
    std::lock_guard lock(mutex_);
    return cache_.emplace(query, url.get<std::string>()).first->second;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::unique_ptr<ImageProvider> make_image_provider(const ApiConfig& config) {
  switch (config.image_provider) {
    case ImageProviderKind::static_map: return StaticMapImageProvider::from_file(config.image_map);
    case ImageProviderKind::external:
      return std::make_unique<ExternalImageProvider>(config.image_endpoint, config.image_key);
    case ImageProviderKind::none: break;
  }
  return std::make_unique<NullImageProvider>();
}

struct Service::Server {
  httplib::Server http;
};

Service::Service(ApiConfig config) : config_(std::move(config)) {
  config_.validate();
  for (const auto& [id, path] : config_.models) {
    try {
      ServedModel served{id, store::load_model(path), store::read_manifest(path)};
      models_.emplace(id, std::move(served));
    } catch (const std::exception& e) {
      throw Error("model '" + id + "' (" + path.string() + "): " + e.what());
    }
  }
  images_ = make_image_provider(config_);
}

Service::Service(ApiConfig config, std::map<std::string, ServedModel> models, std::unique_ptr<ImageProvider> images)
    : config_(std::move(config)), models_(std::move(models)), images_(std::move(images)) {
  if (models_.empty()) throw Error("no models loaded");
  if (!images_) images_ = std::make_unique<NullImageProvider>();
}

std::vector<std::string> Service::model_ids() const {
  std::vector<std::string> ids;
  for (const auto& [dir, served] : models_) {
    for (auto inventory : {wsd::InventoryKind::words, wsd::InventoryKind::super}) {
      if (inventory == wsd::InventoryKind::super && served.model.data().classes.empty()) continue;
      for (auto features : {wsd::FeatureKind::cluster, wsd::FeatureKind::context}) {
        ids.push_back(dir + ":" + wsd::ModelId{inventory, features}.str());
      }
    }
  }
  return ids;
}

Service::Resolved Service::resolve(const std::string& model_id) const {
  auto colon = model_id.rfind(':');
  if (colon == std::string::npos) throw NotFoundError("unknown model: " + model_id);
  auto it = models_.find(model_id.substr(0, colon));
  if (it == models_.end()) throw NotFoundError("unknown model: " + model_id);
  wsd::ModelId id;
  try {
    id = wsd::ModelId::parse(model_id.substr(colon + 1));
  } catch (const Error&) {
    throw NotFoundError("unknown model: " + model_id);
  }
  if (id.inventory == wsd::InventoryKind::super && it->second.model.data().classes.empty()) {
    throw NotFoundError("unknown model: " + model_id + " (no semantic classes)");
  }
  return {&it->second, id};
}

std::optional<std::string> Service::image_for(const std::string& word,
                                              const hypernymy::HypernymLabels& hypernyms) const {
  if (hypernyms.empty()) return std::nullopt;
  return images_->lookup(word, hypernyms.front().word);
}

json Service::candidate_json(const Model& model, const wsd::Candidate& c) const {
  json out;
  out["sense"] = c.str();
  out["sense_id"] = c.id;
  json clues = json::array();
  for (const auto& [feature, weight] : wsd::candidate_vector(model, c, wsd::FeatureKind::context).top(kContextClues).ranked()) {
    clues.push_back({{"feature", feature}, {"weight", weight}});
  }
  json examples = json::array();
  std::optional<std::string> image;
  if (c.kind == wsd::InventoryKind::words) {
    const auto& e = model.sense({c.word, c.id});
    out["word"] = c.word;
    out["hypernyms"] = weighted_json(e.hypernyms);
    out["members"] = weighted_json(e.members);
    for (const auto& ex : e.examples) examples.push_back({{"sentence", ex.sentence}, {"confidence", ex.confidence}});
    image = image_for(c.word, e.hypernyms);
  } else {
    const auto& k = model.class_by_id(c.id);
    out["word"] = nullptr;
    out["hypernyms"] = weighted_json(k.hypernyms);
    WeightedWords members;
    for (const auto& w : k.member_words) members.push_back({w, 1.0});
    out["members"] = weighted_json(members);
  }
  out["context_clues"] = std::move(clues);
  out["examples"] = std::move(examples);
  out["image_url"] = image ? json(*image) : json(nullptr);
  return out;
}

json Service::prediction_json(const Model& model, const std::string& model_id, const wsd::Prediction& p) const {
  json ranked = json::array();
  for (const auto& r : p.ranked) {
    auto item = candidate_json(model, r.sense);
    if (r.sense.kind == wsd::InventoryKind::super) {
      // Class images use the queried word.
      const auto& k = model.class_by_id(r.sense.id);
      auto image = image_for(p.word, k.hypernyms);
      item["image_url"] = image ? json(*image) : json(nullptr);
    }
    item["score"] = r.score;
    json common = json::array();
    for (const auto& f : r.common_features) {
      common.push_back({{"feature", f.feature}, {"context_weight", f.context_weight}, {"sense_weight", f.sense_weight}});
    }
    item["common_features"] = std::move(common);
    ranked.push_back(std::move(item));
  }
  return {{"word", p.word},
          {"model_id", model_id},
          {"confidence", p.confidence},
          {"fallback_used", p.fallback_used},
          {"ranked", std::move(ranked)}};
}

ApiResponse Service::models() const {
  json list = json::array();
  for (const auto& id : model_ids()) {
    auto r = resolve(id);
    const auto& m = r.served->manifest;
    auto count = [&](const char* key) -> json {
      auto it = m.find(key);
      return it == m.end() ? json(nullptr) : json(std::stoull(it->second));
    };
    list.push_back({{"model_id", id},
                    {"inventory", wsd::to_string(r.id.inventory)},
                    {"features", wsd::to_string(r.id.features)},
                    {"counts", {{"words", count("count.words")},
                                {"senses", count("count.senses")},
                                {"classes", count("count.classes")}}}});
  }
  return ok({{"models", std::move(list)}});
}

ApiResponse Service::inventory(const std::string& model_id, const std::string& word) const {
  auto r = resolve(model_id);
  const auto& model = r.served->model;
  auto folded = corpus::fold_case(word);
  json senses = json::array();
  if (r.id.inventory == wsd::InventoryKind::words) {
    const auto& entries = model.senses_of(folded);
    for (const auto& e : entries) senses.push_back(candidate_json(model, {wsd::InventoryKind::words, folded, e.sense_id}));
  } else {
    const auto& ids = model.classes_of(folded);
    if (ids.empty()) throw NotFoundError("not found: " + folded);
    for (auto id : ids) {
      auto item = candidate_json(model, {wsd::InventoryKind::super, {}, id});
      auto image = image_for(folded, model.class_by_id(id).hypernyms);
      item["image_url"] = image ? json(*image) : json(nullptr);
      senses.push_back(std::move(item));
    }
  }
  return ok({{"model_id", model_id}, {"word", folded}, {"senses", std::move(senses)}});
}

ApiResponse Service::predict(const json& body) const {
  auto word = string_field(body, "word");
  auto context = string_field(body, "context");
  auto model_id = string_field(body, "model");
  if (!word || !context || !model_id) return error(400, "missing field: word, context and model are required strings");
  std::uint64_t seed = 0;
  if (auto it = body.find("seed"); it != body.end()) {
    if (!it->is_number_unsigned()) return error(400, "seed must be a non-negative integer");
    seed = it->get<std::uint64_t>();
  }
  auto r = resolve(*model_id);
  if (trim(*context).empty()) return error(422, "empty context");
  if (trim(*word).empty()) return error(400, "empty word");
  auto p = wsd::disambiguate(*word, *context, r.id, r.served->model, seed);
  return ok(prediction_json(r.served->model, *model_id, p));
}

ApiResponse Service::predict_all(const json& body) const {
  auto text = string_field(body, "text");
  auto model_id = string_field(body, "model");
  if (!text || !model_id) return error(400, "missing field: text and model are required strings");
  auto r = resolve(*model_id);
  const auto& model = r.served->model;

  json tokens = json::array();
  for (const auto& span : corpus::split_sentences(*text)) {
    auto sentence = wsd::make_sentence(std::string_view(*text).substr(span.begin, span.end - span.begin),
                                       model.stopwords());
    for (const auto& t : sentence.tokens) {
      auto b = span.begin + t.offset.begin;
      auto e = span.begin + t.offset.end;
      tokens.push_back({{"surface", t.surface},
                        {"norm", t.norm},
                        {"begin", char_offset(*text, b)},
                        {"end", char_offset(*text, e)},
                        {"byte_begin", b},
                        {"byte_end", e}});
    }
  }
  json annotations = json::array();
  for (const auto& a : wsd::disambiguate_all(*text, r.id, model)) {
    annotations.push_back({{"token_index", a.token_index},
                           {"word", a.word},
                           {"begin", char_offset(*text, a.span.begin)},
                           {"end", char_offset(*text, a.span.end)},
                           {"byte_begin", a.span.begin},
                           {"byte_end", a.span.end},
                           {"prediction", prediction_json(model, *model_id, a.prediction)}});
  }
  return ok({{"model_id", *model_id}, {"tokens", std::move(tokens)}, {"annotations", std::move(annotations)}});
}

ApiResponse Service::trace(const std::string& model_id, const std::string& word, const std::string& sense_id,
                           const std::map<std::string, std::string>& query) const {
  auto r = resolve(model_id);
  auto feature = query.find("feature");
  if (feature == query.end() || feature->second.empty()) return error(400, "missing query parameter: feature");
  std::size_t id = 0;
  try {
    std::size_t used = 0;
    id = std::stoul(sense_id, &used);
    if (used != sense_id.size() || sense_id[0] == '-') throw std::invalid_argument(sense_id);
  } catch (const std::exception&) {
    throw NotFoundError("not found: sense " + sense_id);
  }
  wsd::Candidate c{r.id.inventory, r.id.inventory == wsd::InventoryKind::words ? corpus::fold_case(word) : "", id};
  if (c.kind == wsd::InventoryKind::super && word != "class") throw NotFoundError("not found: " + word + "#" + sense_id);
  auto members = wsd::trace_feature(c, feature->second, r.served->model);
  return ok({{"model_id", model_id},
             {"sense", c.str()},
             {"feature", feature->second},
             {"members", weighted_json(members)}});
}

ApiResponse Service::image(const std::map<std::string, std::string>& query) const {
  auto word = query.find("word");
  auto hypernym = query.find("hypernym");
  if (word == query.end() || hypernym == query.end() || word->second.empty() || hypernym->second.empty()) {
    return error(400, "missing query parameter: word and hypernym are required");
  }
  auto url = images_->lookup(word->second, hypernym->second);
  return ok({{"url", url ? json(*url) : json(nullptr)}});
}

ApiResponse Service::handle(const ApiRequest& request) const {
  ApiResponse response;
  auto parts = split_path(request.path);
  try {
    auto parse_body = [&]() -> json {
      json body = json::parse(request.body);
      if (!body.is_object()) throw Error("request body must be a JSON object");
      return body;
    };
    if (request.method == "OPTIONS") {
      response = {204, nullptr, {}};
    } else if (parts.empty() || parts[0] != "api") {
      response = error(404, "no such endpoint: " + request.path);
    } else if (request.method == "GET" && parts.size() == 2 && parts[1] == "models") {
      response = models();
    } else if (request.method == "GET" && parts.size() == 4 && parts[1] == "inventory") {
      response = inventory(parts[2], parts[3]);
    } else if (request.method == "POST" && parts.size() == 2 && parts[1] == "predict") {
      response = predict(parse_body());
    } else if (request.method == "POST" && parts.size() == 2 && parts[1] == "predict-all") {
      response = predict_all(parse_body());
    } else if (request.method == "GET" && parts.size() == 5 && parts[1] == "trace") {
      response = trace(parts[2], parts[3], parts[4], request.query);
    } else if (request.method == "GET" && parts.size() == 2 && parts[1] == "image") {
      response = image(request.query);
    } else {
      response = error(404, "no such endpoint: " + request.method + " " + request.path);
    }
  } catch (const json::exception& e) {
    response = error(400, std::string("invalid JSON body: ") + e.what());
  } catch (const UnknownWordError& e) {
    response = error(404, e.what());
  } catch (const NotFoundError& e) {
    response = error(404, e.what());
  } catch (const ModelNotLoadedError& e) {
    response = error(404, e.what());
  } catch (const Error& e) {
    response = error(400, e.what());
  }

  if (!request.origin.empty()) {
    for (const auto& allowed : config_.cors_origins) {
      if (allowed == "*" || allowed == request.origin) {
        response.headers["Access-Control-Allow-Origin"] = allowed == "*" ? "*" : request.origin;
        response.headers["Access-Control-Allow-Methods"] = "GET, POST, OPTIONS";
        response.headers["Access-Control-Allow-Headers"] = "Content-Type";
        break;
      }
    }
  }
  return response;
}

void Service::run(const std::function<void(int)>& on_ready) {
  server_ = std::make_shared<Server>();
  auto& http = server_->http;
  auto adapt = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest request{req.method, req.path, {}, req.body, req.get_header_value("Origin")};
    for (const auto& [k, v] : req.params) request.query.emplace(k, v);
    auto response = handle(request);
    res.status = response.status;
    for (const auto& [k, v] : response.headers) res.set_header(k, v);
    if (!response.body.is_null()) {
      res.set_content(response.body.dump(-1, ' ', false, json::error_handler_t::replace), "application/json");
    }
  };
  http.Get(R"(/api/.*)", adapt);
  http.Post(R"(/api/.*)", adapt);
  http.Options(R"(/api/.*)", adapt);
  if (!config_.static_dir.empty() && !http.set_mount_point("/", config_.static_dir.string())) {
    throw IoError("static_dir does not exist: " + config_.static_dir.string());
  }
  int port = config_.port;
  if (port == 0) {
    port = http.bind_to_any_port(config_.host);
    if (port < 0) throw IoError("cannot bind " + config_.host);
  } else if (!http.bind_to_port(config_.host, port)) {
    throw IoError("cannot bind " + config_.host + ":" + std::to_string(port));
  }
  if (on_ready) on_ready(port);
  http.listen_after_bind();
}

void Service::stop() {
  if (server_) server_->http.stop();
}

}  // namespace egowsd::service
