# Tests package for the twist obstruction engine
