#pragma once

#include <string>

#include "httplib.h"
#include "pal/service.hpp"

namespace pal {

/// Registers the session API routes on `server`.
void mount_routes(httplib::Server& server, Service& service);

} // namespace pal
