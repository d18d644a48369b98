#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "poisim/corpus.hpp"
#include "poisim/text.hpp"

// The retrieval abstraction the pipeline simulators run against. Wrappers
// (payload interposition, domain blocking) stack on top of a base retriever;
// the chain is queried for attack metadata so a run record can be assembled
// without the simulator knowing how the chain was built.

namespace poisim {

/// One search result as consumed by a pipeline, on a specific surface.
struct RetrievedDoc {
  std::string url;
  int rank = 0;
  Surface surface = Surface::serp_snippet;
  std::string content;       // surface text; a payload may have been appended
  bool injected = false;
  int organic_words = 0;     // words of the organic (pre-injection) content
  int payload_words = 0;     // words of the appended payload, 0 when organic
};

/// A payload append observed on the retrieval path during one run.
struct InjectionEvent {
  std::string query_id;      // stamped by the run loop
  std::string subquery;
  std::string url;
  int payload_words = 0;
  int organic_words = 0;
};

class Retriever {
public:
  virtual ~Retriever() = default;

  /// Results for one sub-query. `call_seed` fully determines rank churn.
  virtual std::vector<RetrievedDoc> retrieve(const std::string& query_text, int k,
                                             std::uint64_t call_seed) = 0;

  /// Entity names of payloads attached anywhere in the wrapper chain.
  virtual void collect_target_entities(std::vector<std::string>& out) const { (void)out; }

  /// Move injection events buffered since the last drain into `out`.
  virtual void drain_injection_events(std::vector<InjectionEvent>& out) { (void)out; }
};

/// Base retriever over the offline corpus index.
class IndexRetriever final : public Retriever {
public:
  IndexRetriever(const SearchIndex& index, Surface surface)
      : index_(index), surface_(surface) {}

  std::vector<RetrievedDoc> retrieve(const std::string& query_text, int k,
                                     std::uint64_t call_seed) override {
    std::vector<RetrievedDoc> out;
    for (const SearchResult& r : search(index_, query_text, k, call_seed)) {
      RetrievedDoc doc;
      doc.url = r.url;
      doc.rank = r.rank;
      doc.surface = surface_;
      doc.content = fetch_content(index_.documents.at(r.url), surface_);
      doc.organic_words = word_count(doc.content);
      out.push_back(std::move(doc));
    }
    return out;
  }

  Surface surface() const { return surface_; }

private:
  const SearchIndex& index_;
  Surface surface_;
};

/// Adapter running a live SearchClient as a retriever (snippet surface only;
/// live full-page fetching is out of scope for the simulator core).
class ClientRetriever final : public Retriever {
public:
  explicit ClientRetriever(SearchClient& client) : client_(client) {}

  std::vector<RetrievedDoc> retrieve(const std::string& query_text, int k,
                                     std::uint64_t /*call_seed*/) override {
    std::vector<RetrievedDoc> out;
    for (const SearchResult& r : client_.results(query_text, k)) {
      RetrievedDoc doc;
      doc.url = r.url;
      doc.rank = r.rank;
      doc.surface = Surface::serp_snippet;
      doc.content = r.snippet;
      doc.organic_words = word_count(doc.content);
      out.push_back(std::move(doc));
    }
    return out;
  }

private:
  SearchClient& client_;
};

}  // namespace poisim
