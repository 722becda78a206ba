#include <dlfcn.h>

#include <memory>
#include <vector>

#include "rmat/errors.hpp"
#include "rmat/plugin_abi.h"
#include "rmat/vertex.hpp"

namespace rmat {

namespace {

struct PluginHandle {
  void* handle = nullptr;
  rmat_plugin_eval_fn eval = nullptr;
  rmat_plugin_classical_fn classical = nullptr;
  std::size_t n = 0;

  ~PluginHandle() {
    if (handle) dlclose(handle);
  }
};

TensorOp unpack(const std::vector<double>& buf, std::size_t n) {
  TensorOp out(SlotShape{n, n});
  auto e = out.entries();
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = cplx{buf[2 * i], buf[2 * i + 1]};
  return out;
}

}  // namespace

RFamily load_plugin_family(const std::string& path, bool certify, double tolerance) {
  auto plugin = std::make_shared<PluginHandle>();
  plugin->handle = dlopen(path.c_str(), RTLD_NOW | RTLD_LOCAL);
  if (!plugin->handle) {
    const char* err = dlerror();
    throw ConfigError("cannot load plugin '" + path + "': " + (err ? err : "unknown error"));
  }
  auto describe = reinterpret_cast<rmat_plugin_describe_fn>(
      dlsym(plugin->handle, RMAT_PLUGIN_DESCRIBE_SYMBOL));
  plugin->eval =
      reinterpret_cast<rmat_plugin_eval_fn>(dlsym(plugin->handle, RMAT_PLUGIN_EVAL_SYMBOL));
  plugin->classical = reinterpret_cast<rmat_plugin_classical_fn>(
      dlsym(plugin->handle, RMAT_PLUGIN_CLASSICAL_SYMBOL));
  if (!describe || !plugin->eval) {
    throw ConfigError("plugin '" + path + "' does not export " RMAT_PLUGIN_DESCRIBE_SYMBOL
                      " and " RMAT_PLUGIN_EVAL_SYMBOL);
  }

  rmat_plugin_info info{};
  if (describe(&info) != 0) throw ConfigError("plugin '" + path + "' refused to describe itself");
  if (info.abi_version != RMAT_PLUGIN_ABI_VERSION) {
    throw ConfigError("plugin '" + path + "' has ABI version " + std::to_string(info.abi_version));
  }
  if (info.n < 1) throw ConfigError("plugin '" + path + "' reports N < 1");
  plugin->n = static_cast<std::size_t>(info.n);

  RFamily::Parts parts;
  parts.name = std::string("plugin:") + (info.name ? info.name : path);
  parts.n = plugin->n;
  switch (info.variant) {
    case RMAT_VARIANT_ELLIPTIC:
      parts.variant = FunctionVariant::elliptic(cplx{info.tau_re, info.tau_im});
      break;
    case RMAT_VARIANT_TRIGONOMETRIC:
      parts.variant = FunctionVariant::trigonometric();
      break;
    case RMAT_VARIANT_RATIONAL:
      parts.variant = FunctionVariant::rational();
      break;
    default:
      throw ConfigError("plugin '" + path + "' reports an unknown variant");
  }
  const std::size_t doubles = 2 * plugin->n * plugin->n * plugin->n * plugin->n;
  parts.eval = [plugin, doubles](cplx h, cplx z) {
    std::vector<double> buf(doubles);
    if (plugin->eval(h.real(), h.imag(), z.real(), z.imag(), buf.data()) != 0) {
      throw PoleProximity("plugin (h, z)", z, 0.0, 0.0);
    }
    return unpack(buf, plugin->n);
  };
  if (plugin->classical) {
    parts.classical = [plugin, doubles](cplx z) {
      std::vector<double> buf(doubles);
      if (plugin->classical(z.real(), z.imag(), buf.data()) != 0) {
        throw PoleProximity("plugin z", z, 0.0, 0.0);
      }
      return unpack(buf, plugin->n);
    };
  }
  RFamily family(std::move(parts));
  if (certify) certify_family(family, tolerance);
  return family;
}

}  // namespace rmat
