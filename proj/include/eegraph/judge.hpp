#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>

#include "eegraph/montage.hpp"
#include "eegraph/prompt.hpp"

namespace eegraph {

enum class Decision { Keep, Remove, Ambiguous };

std::string decision_name(Decision d);

/// Lowercases and strips leading punctuation/whitespace, then reads the first
/// alphabetic token: "yes" keeps, "no" removes, anything else is Ambiguous.
Decision parse_verdict(const std::string& raw);

struct JudgeVerdict {
    Decision decision = Decision::Ambiguous;
    std::string raw_response;
    double latency_ms = 0.0;
    std::string judge_id;
    bool cache_hit = false;
};

enum class JudgeKind { Mock, Remote, AlwaysYes, AlwaysNo };

struct JudgeConfig {
    JudgeKind kind = JudgeKind::Mock;
    std::string id;        // defaults to the kind (or model name) when empty
    std::string endpoint;  // full chat-completions URL, Remote only
    std::string model;
    std::string api_key;
    int timeout_ms = 30000;
    int max_retries = 2;
    int max_parallel = 4;
    std::string cache_dir;     // empty disables the verdict cache
    double temperature = 0.0;  // pinned for reproducibility
    double rate_limit_per_s = 5.0;

    std::string resolved_id() const;
    void validate() const;
};

/// Fills endpoint / api key / model from EEGRAPH_JUDGE_ENDPOINT,
/// EEGRAPH_JUDGE_API_KEY and EEGRAPH_JUDGE_MODEL when unset.
JudgeConfig with_env_defaults(JudgeConfig cfg);

struct JudgeError : std::runtime_error {
    explicit JudgeError(const std::string& what, int http_status = 0)
        : std::runtime_error(what), status(http_status) {}
    int status;
};

/// A structural judge mapping edge prompts to keep/remove verdicts.
///
/// Remote judges POST {model, temperature, messages:[{role:"user",...}]} to a
/// chat-completions endpoint and read the first choice's message text, with
/// retries, a per-endpoint token-bucket rate limit, and a content-addressed
/// verdict cache (SHA-256 of rendered prompt + judge id). The mock judge
/// answers from the prompt text alone: yes iff the two dominant frequencies
/// differ by at most 3 Hz and the lobes are identical or adjacent.
class Judge {
public:
    explicit Judge(JudgeConfig cfg);

    /// Thread-safe up to config().max_parallel concurrent callers.
    JudgeVerdict judge(const EdgePrompt& prompt, bool bypass_cache = false);

    const JudgeConfig& config() const { return cfg_; }
    long network_calls() const { return network_calls_.load(); }

private:
    JudgeVerdict mock_verdict(const EdgePrompt& prompt) const;
    JudgeVerdict remote_verdict(const EdgePrompt& prompt, bool bypass_cache);
    std::optional<JudgeVerdict> cache_lookup(const std::string& key) const;
    void cache_store(const std::string& key, const JudgeVerdict& verdict);
    void rate_limit_acquire();

    JudgeConfig cfg_;
    std::atomic<long> network_calls_{0};
    std::mutex cache_write_mutex_;
    std::mutex rate_mutex_;
    double bucket_tokens_;
    std::chrono::steady_clock::time_point bucket_refill_at_;
};

/// Convenience one-shot form.
JudgeVerdict judge(const EdgePrompt& prompt, const JudgeConfig& cfg);

/// Fields the mock judge reads back out of a rendered node block.
struct ParsedNodeBlock {
    std::optional<double> dominant_frequency_hz;
    std::optional<Lobe> lobe;
};
ParsedNodeBlock parse_node_block(const std::string& block);

}  // namespace eegraph
