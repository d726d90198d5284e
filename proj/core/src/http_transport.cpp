#include <httplib.h>

#include "argrel/corpus_client.hpp"
#include "argrel/errors.hpp"

namespace argrel::corpus {
namespace {

class HttplibTransport final : public HttpTransport {
 public:
  explicit HttplibTransport(std::chrono::milliseconds timeout) : timeout_(timeout) {}

  HttpResponse get(const std::string& url) override {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw NetworkError(url, 0, "not an absolute URL");
    auto path_begin = url.find('/', scheme_end + 3);
    std::string origin = url.substr(0, path_begin);
    std::string path = path_begin == std::string::npos ? "/" : url.substr(path_begin);

    httplib::Client client(origin);
    client.set_follow_location(true);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    auto res = client.Get(path);
    if (!res) throw NetworkError(url, 0, httplib::to_string(res.error()));
    return {res->status, std::move(res->body)};
  }

 private:
  std::chrono::milliseconds timeout_;
};

}  // namespace

std::unique_ptr<HttpTransport> make_http_transport(std::chrono::milliseconds timeout) {
  return std::make_unique<HttplibTransport>(timeout);
}

}  // namespace argrel::corpus
