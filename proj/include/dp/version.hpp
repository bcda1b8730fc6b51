#pragma once

#define DP_VERSION "0.1.0"
