#include "spamlab.h"

#include "spamlab/pipeline.hpp"

using spamlab::RunConfig;

struct slab_config {
    RunConfig cfg;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_dump_buffer;

template <typename F>
int guarded(F&& f) {
    try {
        f();
        g_last_error.clear();
        return SLAB_OK;
    } catch (const spamlab::Error& e) {
        g_last_error = e.what();
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SLAB_ERR_UNKNOWN;
    } catch (...) {
        g_last_error = "unknown error";
        return SLAB_ERR_UNKNOWN;
    }
}

}  // namespace

extern "C" {

const char* slab_version(void) { return "1.0.0"; }

const char* slab_last_error(void) { return g_last_error.c_str(); }

slab_config* slab_config_create(void) { return new (std::nothrow) slab_config(); }

void slab_config_destroy(slab_config* cfg) { delete cfg; }

int slab_config_load_json(slab_config* cfg, const char* json_text) {
    if (!cfg || !json_text) {
        g_last_error = "null argument";
        return SLAB_ERR_INVALID;
    }
    return guarded([&] {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(json_text);
        } catch (const nlohmann::json::exception& e) {
            throw spamlab::ConfigError(std::string("invalid config JSON: ") + e.what());
        }
        cfg->cfg = RunConfig::from_json(j);
    });
}

const char* slab_config_dump_json(slab_config* cfg) {
    if (!cfg) {
        g_last_error = "null argument";
        return "";
    }
    g_dump_buffer = cfg->cfg.to_json().dump(2);
    return g_dump_buffer.c_str();
}

int slab_run(const slab_config* cfg) {
    if (!cfg) {
        g_last_error = "null argument";
        return SLAB_ERR_INVALID;
    }
    return guarded([&] { spamlab::run_pipeline(cfg->cfg); });
}

int slab_ablate_features(const slab_config* cfg, const size_t* sizes, size_t n_sizes) {
    if (!cfg || (n_sizes > 0 && !sizes)) {
        g_last_error = "null argument";
        return SLAB_ERR_INVALID;
    }
    return guarded([&] {
        if (n_sizes == 0) {
            spamlab::ablate_features(cfg->cfg);
        } else {
            spamlab::ablate_features(cfg->cfg, std::vector<size_t>(sizes, sizes + n_sizes));
        }
    });
}

int slab_ablate_prep(const slab_config* cfg) {
    if (!cfg) {
        g_last_error = "null argument";
        return SLAB_ERR_INVALID;
    }
    return guarded([&] { spamlab::ablate_preprocessing(cfg->cfg); });
}

int slab_compare(const slab_config* cfg) {
    if (!cfg) {
        g_last_error = "null argument";
        return SLAB_ERR_INVALID;
    }
    return guarded([&] { spamlab::compare_models(cfg->cfg); });
}

int slab_explain(const slab_config* cfg) {
    if (!cfg) {
        g_last_error = "null argument";
        return SLAB_ERR_INVALID;
    }
    return guarded([&] { spamlab::explain_models(cfg->cfg); });
}

int slab_plot(const slab_config* cfg) {
    if (!cfg) {
        g_last_error = "null argument";
        return SLAB_ERR_INVALID;
    }
    return guarded([&] { spamlab::plot_outputs(cfg->cfg); });
}

}  // extern "C"
