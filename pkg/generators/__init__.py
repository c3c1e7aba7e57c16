# generators/ - Surface validation and analysis, witness search, surface census
