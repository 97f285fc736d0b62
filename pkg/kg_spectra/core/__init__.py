"""Pure numerical operations; nothing here parses flags, prints or exits."""
