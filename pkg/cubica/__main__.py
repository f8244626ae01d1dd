from cubica.main import main

main()
