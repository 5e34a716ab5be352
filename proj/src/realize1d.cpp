namespace entacc {}
