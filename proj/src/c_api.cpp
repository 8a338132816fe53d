#include "reclab/reclab.h"

#include <new>
#include <string>
#include <vector>

#include <json.hpp>

#include "reclab/commands.hpp"
#include "reclab/engine.hpp"
#include "reclab/error.hpp"
#include "reclab/measures.hpp"
#include "reclab/recurrence.hpp"
#include "reclab/symbolic.hpp"

struct reclab_model {
  reclab::MeasurePtr measure;
};

struct reclab_text {
  std::string data;
};

namespace {

thread_local std::string g_last_error;

template <class F>
reclab_status guarded(F&& body) {
  try {
    body();
    return RECLAB_OK;
  } catch (const reclab::Error& e) {
    g_last_error = e.what();
    return static_cast<reclab_status>(static_cast<int>(e.code()));
  } catch (const nlohmann::json::exception& e) {
    g_last_error = std::string("bad JSON: ") + e.what();
    return RECLAB_INVALID_INPUT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return RECLAB_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RECLAB_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return RECLAB_INTERNAL;
  }
}

void require_arg(bool ok, const char* what) {
  if (!ok) reclab::fail(reclab::ErrorCode::invalid_input, std::string("null argument: ") + what);
}

reclab::Word word_from(const uint32_t* word, size_t n) {
  require_arg(word != nullptr && n > 0, "word");
  return reclab::Word(std::vector<reclab::Symbol>(word, word + n));
}

}  // namespace

extern "C" {

const char* reclab_version(void) { return "0.1.0"; }

const char* reclab_status_name(reclab_status status) {
  if (status == RECLAB_OK) return "ok";
  if (status == RECLAB_INTERNAL) return "internal";
  if (status >= RECLAB_INVALID_INPUT && status <= RECLAB_PRECONDITION)
    return reclab::to_string(static_cast<reclab::ErrorCode>(status));
  return "unknown";
}

const char* reclab_last_error_message(void) { return g_last_error.c_str(); }

void reclab_set_thread_count(unsigned threads) { reclab::set_thread_count(threads); }

reclab_status reclab_principal_period(const uint32_t* word, size_t n, size_t* out) {
  return guarded([&] {
    require_arg(out != nullptr, "out");
    *out = reclab::principal_period(word_from(word, n));
  });
}

reclab_status reclab_kappa(uint64_t r, const uint64_t* d, size_t ell, uint64_t* out) {
  return guarded([&] {
    require_arg(d != nullptr && ell > 0 && out != nullptr, "d/out");
    *out = reclab::kappa(r, reclab::RecurrenceSpec(std::vector<std::uint64_t>(d, d + ell), 1.0));
  });
}

reclab_status reclab_model_create(const char* spec, reclab_model** out) {
  return guarded([&] {
    require_arg(spec != nullptr && out != nullptr, "spec/out");
    *out = nullptr;
    const std::string text(spec);
    // Bare preset strings are accepted next to JSON text.
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) j = text;
    auto measure = reclab::parse_model(j);
    *out = new reclab_model{std::move(measure)};
  });
}

void reclab_model_destroy(reclab_model* model) { delete model; }

reclab_status reclab_model_cylinder_prob(const reclab_model* model, const uint32_t* word, size_t n,
                                         double* out) {
  return guarded([&] {
    require_arg(model != nullptr && out != nullptr, "model/out");
    const reclab::Word w = word_from(word, n);
    w.validate(model->measure->alphabet());
    *out = model->measure->cylinder_prob(w);
  });
}

reclab_status reclab_model_sample_path(const reclab_model* model, uint64_t seed, uint32_t* out,
                                       size_t length) {
  return guarded([&] {
    require_arg(model != nullptr && (out != nullptr || length == 0), "model/out");
    if (length == 0) return;
    model->measure->sampler(seed)->fill(std::span<reclab::Symbol>(out, length));
  });
}

reclab_status reclab_model_psi(const reclab_model* model, int64_t m, double* value, int* is_upper_bound) {
  return guarded([&] {
    require_arg(model != nullptr && value != nullptr, "model/value");
    const reclab::PsiValue p = model->measure->psi(m);
    *value = p.value;
    if (is_upper_bound) *is_upper_bound = p.upper_bound ? 1 : 0;
  });
}

reclab_status reclab_model_decay_rate(const reclab_model* model, double* gamma) {
  return guarded([&] {
    require_arg(model != nullptr && gamma != nullptr, "model/gamma");
    *gamma = model->measure->decay_rate().gamma;
  });
}

reclab_status reclab_run(const char* command, const char* config_json, reclab_text** out) {
  return guarded([&] {
    require_arg(command != nullptr && out != nullptr, "command/out");
    *out = nullptr;
    const nlohmann::json config =
        config_json && *config_json ? nlohmann::json::parse(config_json) : nlohmann::json::object();
    *out = new reclab_text{reclab::dump_report(reclab::run_command(command, config))};
  });
}

reclab_status reclab_report_to_csv(const char* report_json, reclab_text** out) {
  return guarded([&] {
    require_arg(report_json != nullptr && out != nullptr, "report/out");
    *out = nullptr;
    *out = new reclab_text{reclab::report_to_csv(nlohmann::json::parse(report_json))};
  });
}

const char* reclab_text_data(const reclab_text* text) { return text ? text->data.c_str() : ""; }

size_t reclab_text_size(const reclab_text* text) { return text ? text->data.size() : 0; }

void reclab_text_destroy(reclab_text* text) { delete text; }

}  // extern "C"
