#include "eegraph/judge.hpp"

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "eegraph/hash.hpp"

namespace eegraph {

namespace fs = std::filesystem;

std::string decision_name(Decision d) {
    switch (d) {
        case Decision::Keep: return "keep";
        case Decision::Remove: return "remove";
        case Decision::Ambiguous: return "ambiguous";
    }
    return "ambiguous";
}

Decision parse_verdict(const std::string& raw) {
    size_t pos = 0;
    while (pos < raw.size() && !std::isalpha(static_cast<unsigned char>(raw[pos]))) ++pos;
    std::string token;
    while (pos < raw.size() && std::isalpha(static_cast<unsigned char>(raw[pos])))
        token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(raw[pos++]))));
    if (token == "yes") return Decision::Keep;
    if (token == "no") return Decision::Remove;
    return Decision::Ambiguous;
}

std::string JudgeConfig::resolved_id() const {
    if (!id.empty()) return id;
    switch (kind) {
        case JudgeKind::Mock: return "mock";
        case JudgeKind::AlwaysYes: return "always-yes";
        case JudgeKind::AlwaysNo: return "always-no";
        case JudgeKind::Remote: return model.empty() ? "remote" : model;
    }
    return "judge";
}

void JudgeConfig::validate() const {
    if (max_parallel < 1) throw std::invalid_argument("judge config: max_parallel must be >= 1");
    if (kind == JudgeKind::Remote && endpoint.empty())
        throw std::invalid_argument("judge config: remote judge needs an endpoint URL");
    if (timeout_ms < 1) throw std::invalid_argument("judge config: timeout must be positive");
    if (max_retries < 0) throw std::invalid_argument("judge config: max_retries must be >= 0");
    if (rate_limit_per_s <= 0) throw std::invalid_argument("judge config: rate limit must be positive");
}

JudgeConfig with_env_defaults(JudgeConfig cfg) {
    auto from_env = [](const char* name) -> std::string {
        const char* v = std::getenv(name);
        return v ? v : "";
    };
    if (cfg.endpoint.empty()) cfg.endpoint = from_env("EEGRAPH_JUDGE_ENDPOINT");
    if (cfg.api_key.empty()) cfg.api_key = from_env("EEGRAPH_JUDGE_API_KEY");
    if (cfg.model.empty()) cfg.model = from_env("EEGRAPH_JUDGE_MODEL");
    return cfg;
}

ParsedNodeBlock parse_node_block(const std::string& block) {
    ParsedNodeBlock parsed;
    static const std::pair<const char*, Lobe> lobe_phrases[] = {
        {"located in the frontal lobe", Lobe::Frontal},
        {"located in the temporal lobe", Lobe::Temporal},
        {"located in the central region", Lobe::Central},
        {"located in the parietal lobe", Lobe::Parietal},
        {"located in the occipital lobe", Lobe::Occipital},
    };
    for (const auto& [phrase, lobe] : lobe_phrases) {
        if (block.find(phrase) != std::string::npos) {
            parsed.lobe = lobe;
            break;
        }
    }
    const std::string label = "Dominant frequency: ";
    if (const auto at = block.find(label); at != std::string::npos) {
        try {
            parsed.dominant_frequency_hz = std::stod(block.substr(at + label.size()));
        } catch (const std::exception&) {
        }
    }
    return parsed;
}

Judge::Judge(JudgeConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    bucket_tokens_ = cfg_.rate_limit_per_s;
    bucket_refill_at_ = std::chrono::steady_clock::now();
    if (!cfg_.cache_dir.empty()) fs::create_directories(cfg_.cache_dir);
}

JudgeVerdict Judge::mock_verdict(const EdgePrompt& prompt) const {
    const ParsedNodeBlock a = parse_node_block(prompt.node_i_text);
    const ParsedNodeBlock b = parse_node_block(prompt.node_j_text);
    JudgeVerdict v;
    v.judge_id = cfg_.resolved_id();
    if (!a.dominant_frequency_hz || !b.dominant_frequency_hz || !a.lobe || !b.lobe) {
        v.raw_response = "no, the node features could not be read from the prompt";
    } else {
        const double df = std::abs(*a.dominant_frequency_hz - *b.dominant_frequency_hz);
        const bool keep = df <= 3.0 && lobes_adjacent_or_equal(*a.lobe, *b.lobe);
        v.raw_response = keep ? "yes" : "no";
    }
    v.decision = parse_verdict(v.raw_response);
    return v;
}

std::optional<JudgeVerdict> Judge::cache_lookup(const std::string& key) const {
    if (cfg_.cache_dir.empty()) return std::nullopt;
    const fs::path path = fs::path(cfg_.cache_dir) / (key + ".json");
    std::ifstream in(path);
    if (!in) return std::nullopt;
    try {
        nlohmann::json j;
        in >> j;
        JudgeVerdict v;
        v.raw_response = j.at("raw_response").get<std::string>();
        v.judge_id = j.at("judge_id").get<std::string>();
        v.decision = parse_verdict(v.raw_response);  // decision always re-derived
        v.cache_hit = true;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;  // unreadable entries are treated as misses
    }
}

void Judge::cache_store(const std::string& key, const JudgeVerdict& verdict) {
    if (cfg_.cache_dir.empty()) return;
    nlohmann::ordered_json j;
    j["prompt_hash"] = key;
    j["judge_id"] = verdict.judge_id;
    j["raw_response"] = verdict.raw_response;
    j["decision"] = decision_name(verdict.decision);
    j["timestamp"] =
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();

    std::lock_guard<std::mutex> lock(cache_write_mutex_);
    const fs::path path = fs::path(cfg_.cache_dir) / (key + ".json");
    const fs::path tmp = fs::path(cfg_.cache_dir) / (key + ".tmp");
    {
        std::ofstream out(tmp);
        out << j.dump(2) << "\n";
    }
    fs::rename(tmp, path);
}

void Judge::rate_limit_acquire() {
    using clock = std::chrono::steady_clock;
    while (true) {
        std::unique_lock<std::mutex> lock(rate_mutex_);
        const auto now = clock::now();
        const double elapsed = std::chrono::duration<double>(now - bucket_refill_at_).count();
        bucket_tokens_ = std::min(cfg_.rate_limit_per_s, bucket_tokens_ + elapsed * cfg_.rate_limit_per_s);
        bucket_refill_at_ = now;
        if (bucket_tokens_ >= 1.0) {
            bucket_tokens_ -= 1.0;
            return;
        }
        const double wait_s = (1.0 - bucket_tokens_) / cfg_.rate_limit_per_s;
        lock.unlock();
        std::this_thread::sleep_for(std::chrono::duration<double>(wait_s));
    }
}

JudgeVerdict Judge::remote_verdict(const EdgePrompt& prompt, bool bypass_cache) {
    const std::string key = sha256_hex(prompt.rendered + "\n" + cfg_.resolved_id());
    if (!bypass_cache) {
        if (auto cached = cache_lookup(key)) return *cached;
    }

    nlohmann::ordered_json body;
    body["model"] = cfg_.model;
    body["temperature"] = cfg_.temperature;
    body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", prompt.rendered}}});
    const std::string payload = body.dump();

    // Split the endpoint into base and path for the HTTP client.
    const auto scheme_end = cfg_.endpoint.find("://");
    if (scheme_end == std::string::npos)
        throw JudgeError("judge endpoint '" + cfg_.endpoint + "' has no scheme");
    const auto path_start = cfg_.endpoint.find('/', scheme_end + 3);
    const std::string base =
        path_start == std::string::npos ? cfg_.endpoint : cfg_.endpoint.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : cfg_.endpoint.substr(path_start);

    std::string last_error;
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(50L * (1L << std::min(attempt, 5))));
        rate_limit_acquire();

        httplib::Client client(base);
        client.set_connection_timeout(0, cfg_.timeout_ms * 1000);
        client.set_read_timeout(cfg_.timeout_ms / 1000, (cfg_.timeout_ms % 1000) * 1000);
        httplib::Headers headers;
        if (!cfg_.api_key.empty()) headers.emplace("Authorization", "Bearer " + cfg_.api_key);

        const auto start = std::chrono::steady_clock::now();
        network_calls_.fetch_add(1);
        auto res = client.Post(path, headers, payload, "application/json");
        const double latency =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();

        if (!res) {
            last_error = "network failure: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            last_error = "HTTP " + std::to_string(res->status);
            if (res->status >= 400 && res->status < 500 && res->status != 429)
                throw JudgeError("judge endpoint rejected the request (" + last_error + ")",
                                 res->status);
            continue;
        }
        try {
            const auto j = nlohmann::json::parse(res->body);
            JudgeVerdict v;
            v.raw_response = j.at("choices").at(0).at("message").at("content").get<std::string>();
            v.latency_ms = latency;
            v.judge_id = cfg_.resolved_id();
            v.decision = parse_verdict(v.raw_response);
            cache_store(key, v);
            return v;
        } catch (const nlohmann::json::exception& e) {
            last_error = std::string("unparseable response body: ") + e.what();
        }
    }
    throw JudgeError("judge '" + cfg_.resolved_id() + "' failed after " +
                     std::to_string(cfg_.max_retries + 1) + " attempts (" + last_error + ")");
}

JudgeVerdict Judge::judge(const EdgePrompt& prompt, bool bypass_cache) {
    switch (cfg_.kind) {
        case JudgeKind::Mock: return mock_verdict(prompt);
        case JudgeKind::AlwaysYes: {
            JudgeVerdict v{Decision::Keep, "yes", 0.0, cfg_.resolved_id(), false};
            return v;
        }
        case JudgeKind::AlwaysNo: {
            JudgeVerdict v{Decision::Remove, "no", 0.0, cfg_.resolved_id(), false};
            return v;
        }
        case JudgeKind::Remote: return remote_verdict(prompt, bypass_cache);
    }
    throw std::logic_error("unknown judge kind");
}

JudgeVerdict judge(const EdgePrompt& prompt, const JudgeConfig& cfg) {
    Judge j(cfg);
    return j.judge(prompt);
}

}  // namespace eegraph
