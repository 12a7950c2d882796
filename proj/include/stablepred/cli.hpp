#ifndef STABLEPRED_CLI_HPP
#define STABLEPRED_CLI_HPP

namespace stablepred {

// Exit codes: 0 pass, 1 guarantee violated, 2 operational error.
int cli_main(int argc, char** argv);

}  // namespace stablepred

#endif
