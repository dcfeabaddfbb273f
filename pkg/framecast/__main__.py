from framecast.main import main

main()
