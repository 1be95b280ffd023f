csx n=2
cc33
