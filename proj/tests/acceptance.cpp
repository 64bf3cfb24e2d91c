#include "support/doctest_main_with_cli.hpp"
