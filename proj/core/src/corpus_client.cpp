#include "argrel/corpus_client.hpp"

#include <algorithm>
#include <cstdlib>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "argrel/atomic_file.hpp"
#include "argrel/digest.hpp"
#include "argrel/errors.hpp"

namespace argrel::corpus {

namespace fs = std::filesystem;
using nlohmann::json;

bool is_safe_id(std::string_view id) {
  if (id.empty() || id.front() == '.') return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '.' || c == '_' || c == '-';
  });
}

void CorpusRef::check() const {
  if (!is_safe_id(corpus_id)) {
    throw Error(ErrorCode::InvalidArgument, "invalid corpus id '" + corpus_id + "'");
  }
  auto starts = [&](std::string_view p) {
    return base_url.size() > p.size() && base_url.compare(0, p.size(), p) == 0;
  };
  if (!starts("http://") && !starts("https://")) {
    throw Error(ErrorCode::InvalidArgument, "base url must be absolute http(s): " + base_url);
  }
}

std::string snapshot_digest(std::span<const MapDocument> maps) {
  Sha256 h;
  for (const auto& m : maps) {
    h.update(m.map_id);
    h.update("\n");
    h.update(std::to_string(m.bytes.size()));
    h.update("\n");
    h.update(m.bytes);
    h.update("\n");
  }
  return h.hex_digest();
}

std::string render_manifest(std::span<const MapDocument> maps) {
  std::string out;
  for (const auto& m : maps) {
    out += m.map_id;
    out += '\t';
    out += sha256_hex(m.bytes);
    out += '\n';
  }
  return out;
}

std::vector<ManifestEntry> read_manifest(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::vector<ManifestEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw FormatError(path.string(), line_no, "expected map_id<TAB>sha256");
    }
    ManifestEntry e{line.substr(0, tab), line.substr(tab + 1)};
    if (!is_safe_id(e.map_id) || e.sha256.size() != 64) {
      throw FormatError(path.string(), line_no, "malformed manifest record");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

fs::path default_cache_root() {
  if (const char* env = std::getenv("ARGREL_CACHE_DIR"); env && *env) return fs::path(env);
  return fs::path("aifdb-cache");
}

namespace {

CorpusSnapshot finish(std::string corpus_id, std::vector<MapDocument> maps) {
  std::sort(maps.begin(), maps.end(),
            [](const MapDocument& a, const MapDocument& b) { return a.map_id < b.map_id; });
  CorpusSnapshot snap;
  snap.corpus_id = std::move(corpus_id);
  snap.retrieved_at = std::chrono::system_clock::now();
  snap.content_digest = snapshot_digest(snap.maps = std::move(maps));
  return snap;
}

CorpusSnapshot load_with_manifest(const fs::path& dir, std::string_view corpus_id) {
  const fs::path manifest = dir / kManifestName;
  std::vector<MapDocument> maps;
  for (const auto& entry : read_manifest(manifest)) {
    const fs::path file = dir / (entry.map_id + ".json");
    if (!fs::exists(file)) {
      throw Error(ErrorCode::CacheCorrupt, "manifest lists missing file " + file.string());
    }
    std::string bytes = read_file(file);
    if (sha256_hex(bytes) != entry.sha256) {
      throw Error(ErrorCode::CacheCorrupt, "digest mismatch for " + file.string());
    }
    maps.push_back({entry.map_id, std::move(bytes)});
  }
  return finish(std::string(corpus_id), std::move(maps));
}

std::string substitute(std::string tmpl, std::string_view key, std::string_view value) {
  for (auto pos = tmpl.find(key); pos != std::string::npos; pos = tmpl.find(key, pos)) {
    tmpl.replace(pos, key.size(), value);
    pos += value.size();
  }
  return tmpl;
}

std::vector<std::string> parse_listing(const std::string& body, const std::string& url) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    throw MalformedJson(url, e.byte, e.what());
  }
  const json* ids = &doc;
  if (doc.is_object()) {
    auto it = doc.find("nodeSets");
    if (it == doc.end()) throw SchemaViolation(url, "/nodeSets", "missing map id list");
    ids = &*it;
  }
  if (!ids->is_array()) throw SchemaViolation(url, "/", "expected an array of map ids");
  std::set<std::string> unique;
  for (const auto& v : *ids) {
    std::string id = v.is_string() ? v.get<std::string>() : v.dump();
    if (!is_safe_id(id)) throw SchemaViolation(url, "/", "unusable map id " + id);
    unique.insert(std::move(id));
  }
  return {unique.begin(), unique.end()};
}

class Fetcher {
 public:
  explicit Fetcher(const FetchOptions& options) : options_(options) {
    if (!options_.transport) {
      owned_ = make_http_transport();
      transport_ = owned_.get();
    } else {
      transport_ = options_.transport;
    }
  }

  std::string get(const std::string& url) {
    for (int attempt = 0;; ++attempt) {
      pace();
      try {
        if (options_.log) *options_.log << "GET " << url << "\n";
        HttpResponse res = transport_->get(url);
        if (res.status == 200) return std::move(res.body);
        throw NetworkError(url, res.status, "unexpected HTTP status");
      } catch (const NetworkError& e) {
        if (!e.retryable() || attempt >= options_.max_retries) throw;
        if (options_.log) *options_.log << "retrying after: " << e.what() << "\n";
      }
    }
  }

 private:
  void pace() {
    if (requests_++ == 0 || options_.delay.count() <= 0) return;
    if (options_.sleep) options_.sleep(options_.delay);
    else std::this_thread::sleep_for(options_.delay);
  }

  const FetchOptions& options_;
  std::unique_ptr<HttpTransport> owned_;
  HttpTransport* transport_ = nullptr;
  std::size_t requests_ = 0;
};

}  // namespace

CorpusSnapshot open_cache(const fs::path& cache_dir, std::string_view corpus_id) {
  const fs::path dir = cache_dir / std::string(corpus_id);
  if (fs::exists(dir / kManifestName)) return load_with_manifest(dir, corpus_id);
  return load_local(dir, corpus_id);
}

CorpusSnapshot load_local(const fs::path& dir, std::string_view corpus_id) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::IoError, "not a directory: " + dir.string());
  std::vector<MapDocument> maps;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
    std::string bytes = read_file(entry.path());
    try {
      [[maybe_unused]] const json doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
      throw MalformedJson(entry.path().filename().string(), e.byte, e.what());
    }
    maps.push_back({entry.path().stem().string(), std::move(bytes)});
  }
  return finish(std::string(corpus_id), std::move(maps));
}

CorpusSnapshot fetch_corpus(const CorpusRef& ref, const fs::path& cache_dir,
                            const FetchOptions& options) {
  ref.check();
  const fs::path dir = cache_dir / ref.corpus_id;
  if (fs::exists(dir / kManifestName)) return load_with_manifest(dir, ref.corpus_id);

  Fetcher fetcher(options);
  std::string base = ref.base_url;
  while (!base.empty() && base.back() == '/') base.pop_back();

  const std::string listing_url =
      substitute(substitute(options.listing_url_template, "{base}", base), "{corpus}",
                 ref.corpus_id);
  const auto ids = parse_listing(fetcher.get(listing_url), listing_url);

  std::vector<MapDocument> maps;
  maps.reserve(ids.size());
  for (const auto& id : ids) {
    const fs::path file = dir / (id + ".json");
    if (fs::exists(file)) {
      maps.push_back({id, read_file(file)});
      continue;
    }
    const std::string url =
        substitute(substitute(options.map_url_template, "{base}", base), "{map}", id);
    std::string bytes = fetcher.get(url);
    write_file_atomic(file, bytes);
    maps.push_back({id, std::move(bytes)});
  }

  CorpusSnapshot snap = finish(ref.corpus_id, std::move(maps));
  write_file_atomic(dir / kManifestName, render_manifest(snap.maps));
  return snap;
}

}  // namespace argrel::corpus
