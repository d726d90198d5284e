#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace argrel::corpus {

struct CorpusRef {
  std::string corpus_id;
  std::string base_url = "http://corpora.aifdb.org";

  /// Throws InvalidArgument unless corpus_id is a non-empty file-name-safe
  /// token and base_url is an absolute http(s) URL.
  void check() const;
};

struct MapDocument {
  std::string map_id;
  std::string bytes;

  friend bool operator==(const MapDocument&, const MapDocument&) = default;
};

struct CorpusSnapshot {
  std::string corpus_id;
  std::chrono::system_clock::time_point retrieved_at;
  /// Sorted by map_id, ids unique.
  std::vector<MapDocument> maps;
  std::string content_digest;
};

/// SHA-256 over `map_id \n byte-length \n bytes \n` for each map in the
/// given (already id-sorted) order.
std::string snapshot_digest(std::span<const MapDocument> maps);

struct HttpResponse {
  int status = 0;
  std::string body;
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  /// Throws NetworkError with status 0 when no response arrives.
  virtual HttpResponse get(const std::string& url) = 0;
};

std::unique_ptr<HttpTransport> make_http_transport(
    std::chrono::milliseconds timeout = std::chrono::seconds(30));

struct FetchOptions {
  /// `{base}` and `{corpus}` are substituted. The response is either a JSON
  /// array of map ids or an object holding one under "nodeSets".
  std::string listing_url_template = "{base}/nodesets.php?shortname={corpus}";
  /// `{base}` and `{map}` are substituted.
  std::string map_url_template = "http://www.aifdb.org/json/{map}";
  /// Pause between consecutive requests.
  std::chrono::milliseconds delay{500};
  int max_retries = 2;
  /// Borrowed; a cpp-httplib transport is created when null.
  HttpTransport* transport = nullptr;
  /// Injected for tests; defaults to std::this_thread::sleep_for.
  std::function<void(std::chrono::milliseconds)> sleep;
  std::ostream* log = nullptr;
};

inline constexpr std::string_view kManifestName = "manifest.tsv";

/// Returns every map of the corpus, serving from
/// `<cache_dir>/<corpus_id>/<map_id>.json` where present. A complete cache
/// (manifest present) is served without any network request and verified
/// against the manifest digests (CacheCorrupt on mismatch). Fetched bytes are
/// stored verbatim, one atomic file per map, then the manifest is written.
CorpusSnapshot fetch_corpus(const CorpusRef& ref, const std::filesystem::path& cache_dir,
                            const FetchOptions& options = {});

/// Snapshot from a directory holding one `<map_id>.json` per map. Every file
/// must be well-formed JSON (MalformedJson names the file).
CorpusSnapshot load_local(const std::filesystem::path& dir, std::string_view corpus_id);

/// Snapshot for `<cache_dir>/<corpus_id>`. Verified against the manifest when
/// one exists, otherwise identical to load_local.
CorpusSnapshot open_cache(const std::filesystem::path& cache_dir, std::string_view corpus_id);

struct ManifestEntry {
  std::string map_id;
  std::string sha256;
};

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
std::string render_manifest(std::span<const MapDocument> maps);

/// $ARGREL_CACHE_DIR when set, else "./aifdb-cache".
std::filesystem::path default_cache_root();

/// Letters, digits, '.', '_' and '-', not starting with '.'.
bool is_safe_id(std::string_view id);

}  // namespace argrel::corpus
