#include "d2lqg/controller.hpp"

namespace d2lqg {

std::string method_name(Method m) {
    switch (m) {
        case Method::LQG: return "lqg";
        case Method::DLQG: return "dlqg";
        case Method::D2LQG: return "d2lqg";
        case Method::D2LQG_E2: return "d2lqg_e2";
    }
    return "unknown";
}

std::optional<Method> method_from_name(const std::string& name) {
    if (name == "lqg") return Method::LQG;
    if (name == "dlqg") return Method::DLQG;
    if (name == "d2lqg") return Method::D2LQG;
    if (name == "d2lqg_e2") return Method::D2LQG_E2;
    return std::nullopt;
}

}  // namespace d2lqg
