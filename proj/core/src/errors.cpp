#include "monwalk/errors.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace monwalk {
namespace {

std::mutex handler_mutex;

WarningHandler& handler_slot() {
    static WarningHandler h = [](const std::string& m) { std::clog << "warning: " << m << '\n'; };
    return h;
}

}  // namespace

WarningHandler set_warning_handler(WarningHandler handler) {
    std::lock_guard lock(handler_mutex);
    return std::exchange(handler_slot(), std::move(handler));
}

void warn(const std::string& message) {
    std::lock_guard lock(handler_mutex);
    if (handler_slot()) handler_slot()(message);
}

}  // namespace monwalk
