#pragma once

#define NGPLAB_VERSION "0.1.0"
